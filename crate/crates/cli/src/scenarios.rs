//! Built-in scenarios, addressable by name on the command line.

pub const BUILTIN: &[(&str, &str)] = &[
    ("flag3", include_str!("../../../scenarios/flag3.toml")),
    ("families", include_str!("../../../scenarios/families.toml")),
    ("fullflag", include_str!("../../../scenarios/fullflag.toml")),
    ("custom", include_str!("../../../scenarios/custom.toml")),
];

pub fn builtin(name: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}
