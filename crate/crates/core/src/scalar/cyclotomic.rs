use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{reduced_angle, Scalar};
use crate::linalg;

/// Reduction data for ℚ(ζ_n): row `j` holds the coordinates of `x^j mod Φ_n`
/// in the power basis, for `0 ≤ j < n`.
struct Table {
    n: u64,
    phi: usize,
    rows: Vec<Vec<i64>>,
}

fn poly_divexact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // Both monic, coefficient vectors in increasing degree.
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quo = vec![0i64; qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd];
        quo[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0), "cyclotomic division not exact");
    quo
}

fn cyclotomic_poly(n: u64, cache: &mut HashMap<u64, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let pd = cyclotomic_poly(d, cache);
        p = poly_divexact(&p, &pd);
    }
    cache.insert(n, p.clone());
    p
}

fn table(n: u64) -> Arc<Table> {
    static TABLES: OnceLock<Mutex<HashMap<u64, Arc<Table>>>> = OnceLock::new();
    static POLYS: OnceLock<Mutex<HashMap<u64, Vec<i64>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    if let Some(t) = tables.lock().expect("table cache poisoned").get(&n) {
        return t.clone();
    }
    let phi_poly = {
        let mut polys = POLYS.get_or_init(Default::default).lock().expect("poly cache poisoned");
        cyclotomic_poly(n, &mut polys)
    };
    let phi = phi_poly.len() - 1;
    let mut rows = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        rows.push(cur.clone());
        // multiply by x and reduce the overflow coefficient
        let top = cur[phi - 1];
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..phi {
                cur[i] -= top * phi_poly[i];
            }
        }
    }
    let t = Arc::new(Table { n, phi, rows });
    tables.lock().expect("table cache poisoned").insert(n, t.clone());
    t
}

/// Euler's totient of `n` (the degree of ℚ(ζ_n) over ℚ).
pub fn totient(n: u64) -> usize {
    table(n).phi
}

/// An exact element of the cyclotomic field ℚ(ζ_n).
///
/// Each value carries its own conductor `n`; binary operations work in
/// ℚ(ζ_lcm). Values that happen to be rational are normalized to conductor 1,
/// which keeps arithmetic on rational seeds cheap.
#[derive(Clone)]
pub struct Cyclotomic {
    n: u64,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    /// Build from power-basis coordinates of length φ(n).
    pub fn from_power_basis(n: u64, coeffs: Vec<BigRational>) -> Self {
        assert!(n >= 1, "conductor must be positive");
        assert_eq!(coeffs.len(), totient(n), "wrong number of coordinates");
        Self { n, coeffs }.normalized()
    }

    pub fn rational(r: BigRational) -> Self {
        Self { n: 1, coeffs: vec![r] }
    }

    /// The conductor this value is currently expressed in.
    pub fn conductor(&self) -> u64 {
        self.n
    }

    /// Coordinates against `1, ζ, …, ζ^{φ(n)−1}`.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.n == 1).then(|| &self.coeffs[0])
    }

    fn normalized(mut self) -> Self {
        if self.n > 1 && self.coeffs[1..].iter().all(Zero::is_zero) {
            self.coeffs.truncate(1);
            self.n = 1;
        }
        self
    }

    fn lift(&self, l: u64) -> Vec<BigRational> {
        if l == self.n {
            return self.coeffs.clone();
        }
        let t = table(l);
        let step = (l / self.n) as usize;
        let mut out = vec![BigRational::zero(); t.phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(&t.rows[(i * step) % l as usize]) {
                if r != 0 {
                    *o += c * BigRational::from_integer(r.into());
                }
            }
        }
        out
    }

    fn common(&self, other: &Self) -> (u64, Vec<BigRational>, Vec<BigRational>) {
        let l = self.n.lcm(&other.n);
        (l, self.lift(l), other.lift(l))
    }

    fn multiply(&self, other: &Self) -> Self {
        if self.n == 1 && other.n == 1 {
            return Self::rational(&self.coeffs[0] * &other.coeffs[0]);
        }
        if self.n == 1 || other.n == 1 {
            let (r, v) = if self.n == 1 { (&self.coeffs[0], other) } else { (&other.coeffs[0], self) };
            if r.is_zero() {
                return Self::zero();
            }
            let coeffs = v.coeffs.iter().map(|c| c * r).collect();
            return Self { n: v.n, coeffs };
        }
        let (l, a, b) = self.common(other);
        let t = table(l);
        let lu = l as usize;
        let mut acc = vec![BigRational::zero(); lu];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                acc[(i + j) % lu] += x * y;
            }
        }
        let mut out = vec![BigRational::zero(); t.phi];
        for (j, c) in acc.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (o, &r) in out.iter_mut().zip(&t.rows[j]) {
                if r != 0 {
                    *o += c * BigRational::from_integer(r.into());
                }
            }
        }
        Self { n: l, coeffs: out }.normalized()
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.coeffs == other.coeffs;
        }
        let (_, a, b) = self.common(other);
        a == b
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*z{}", self.n),
                _ => format!("{c}*z{}^{i}", self.n),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Self::rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Self::rational(BigRational::one())
    }
}

impl Add for Cyclotomic {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.n == rhs.n {
            let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
            return Self { n: self.n, coeffs }.normalized();
        }
        let (l, a, b) = self.common(&rhs);
        let coeffs = a.iter().zip(&b).map(|(a, b)| a + b).collect();
        Self { n: l, coeffs }.normalized()
    }
}

impl Neg for Cyclotomic {
    type Output = Self;
    fn neg(self) -> Self {
        Self { n: self.n, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Sub for Cyclotomic {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for Cyclotomic {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.multiply(&rhs)
    }
}

impl Scalar for Cyclotomic {
    const EXACT: bool = true;

    fn from_rational(r: &BigRational) -> Self {
        Self::rational(r.clone())
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.n == 1 {
            return Some(Self::rational(self.coeffs[0].recip()));
        }
        // Solve (self · v) = 1 using the multiplication-by-self matrix.
        let phi = self.coeffs.len();
        let cols: Vec<Vec<BigRational>> = (0..phi)
            .map(|i| {
                let mut e = vec![BigRational::zero(); phi];
                e[i] = BigRational::one();
                (Self { n: self.n, coeffs: e }.multiply(self)).lift(self.n)
            })
            .collect();
        let m: linalg::Matrix<BigRational> = (0..phi).map(|r| (0..phi).map(|c| cols[c][r].clone()).collect()).collect();
        let mut rhs = vec![BigRational::zero(); phi];
        rhs[0] = BigRational::one();
        let v = linalg::solve(&m, &rhs)?;
        Some(Self { n: self.n, coeffs: v }.normalized())
    }

    fn root_of_unity(order: u64, k: i64) -> Option<Self> {
        if order == 0 {
            return None;
        }
        let t = table(order);
        let j = k.rem_euclid(order as i64) as usize;
        let coeffs = t.rows[j].iter().map(|&c| BigRational::from_integer(c.into())).collect();
        debug_assert_eq!(t.n, order);
        Some(Self { n: order, coeffs }.normalized())
    }

    fn root_of_unity_angle(&self, max_order: u64) -> Option<BigRational> {
        let z = self.to_complex();
        if (z.norm() - 1.0).abs() > 1e-6 {
            return None;
        }
        // Roots of unity in ℚ(ζ_n) have order dividing lcm(2, n).
        let l = self.n.lcm(&2);
        let theta = z.arg() / std::f64::consts::TAU;
        let k = (theta * l as f64).round() as i64;
        let cand = Self::root_of_unity(l, k)?;
        if &cand != self {
            return None;
        }
        let angle = reduced_angle(k, l);
        (angle.denom().to_u64()? <= max_order).then_some(angle)
    }

    fn to_complex(&self) -> Complex64 {
        let n = self.n as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), std::f64::consts::TAU * i as f64 / n))
            .sum()
    }

    fn exp(&self) -> Option<Self> {
        self.is_zero().then(Self::one)
    }

    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k).unwrap()
    }

    fn q(n: i64, d: i64) -> Cyclotomic {
        Cyclotomic::rational(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn cyclotomic_polynomials() {
        let mut cache = HashMap::new();
        assert_eq!(cyclotomic_poly(1, &mut cache), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(6, &mut cache), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12, &mut cache), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of absolute value 2.
        assert!(cyclotomic_poly(105, &mut cache).contains(&-2));
        assert_eq!(totient(60), 16);
    }

    #[test]
    fn roots_of_unity_are_exact() {
        assert_eq!(z(3, 1).powi(3).unwrap(), Cyclotomic::one());
        assert_eq!(z(2, 1), q(-1, 1));
        assert_eq!(z(4, 2), q(-1, 1));
        // 1 + ζ3 + ζ3² = 0
        assert!((Cyclotomic::one() + z(3, 1) + z(3, 2)).is_zero());
        // ζ6 = -ζ3²
        assert_eq!(z(6, 1), -z(3, 2));
        // embeddings across conductors agree
        assert_eq!(z(12, 4), z(3, 1));
        assert_eq!(z(60, 25) * z(60, 35), Cyclotomic::one());
        assert_eq!(z(5, 1) * z(3, 1), z(15, 8));
    }

    #[test]
    fn rational_results_collapse_to_conductor_one() {
        let a = z(12, 5) * z(12, 7);
        assert_eq!(a.conductor(), 1);
        assert_eq!(a.as_rational(), Some(&BigRational::one()));
    }

    #[test]
    fn inverses() {
        let a = q(2, 1) + z(7, 3) - q(1, 3) * z(7, 5);
        let b = a.inv().unwrap();
        assert_eq!(a * b, Cyclotomic::one());
        assert!(Cyclotomic::zero().inv().is_none());
        assert_eq!(q(3, 4).inv().unwrap(), q(4, 3));
    }

    #[test]
    fn angles() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(q(-1, 1).root_of_unity_angle(12), Some(half));
        assert_eq!(z(12, 5).root_of_unity_angle(12), Some(BigRational::new(5.into(), 12.into())));
        assert_eq!(z(12, 5).root_of_unity_angle(6), None);
        // -ζ5 has order 10, found although the conductor is 5
        assert_eq!((-z(5, 1)).root_of_unity_angle(60), Some(BigRational::new(7.into(), 10.into())));
        assert_eq!(q(2, 1).root_of_unity_angle(60), None);
        // modulus one but not a root of unity: (3 + 4i)/5
        let gauss = q(3, 5) + q(4, 5) * z(4, 1);
        assert!((gauss.to_complex().norm() - 1.0).abs() < 1e-12);
        assert_eq!(gauss.root_of_unity_angle(1000), None);
    }

    #[test]
    fn complex_embedding() {
        let w = z(8, 1).to_complex();
        assert!((w.re - 0.5f64.sqrt()).abs() < 1e-12 && (w.im - 0.5f64.sqrt()).abs() < 1e-12);
        let s = (z(8, 1) + z(8, 7)).to_complex();
        assert!((s.re - 2f64.sqrt()).abs() < 1e-12 && s.im.abs() < 1e-12);
    }
}
