//! Finite fields GF(p^m) and a Reed-Solomon erasure code over them.
//!
//! An element of GF(p^m) is stored as the integer whose base-`p` digits are
//! its polynomial coefficients, lowest degree first. Multiplication goes
//! through log/antilog tables built once per field from a generator found by
//! order search, so any irreducible modulus works (primitive or not).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Elem = u32;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Binary moduli for degrees 1..=16, bit `i` is the coefficient of `x^i`.
const BINARY_MODULI: [u32; 16] = [
    0x2, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    /// Monic modulus coefficients, lowest degree first (length `m + 1`).
    pub modulus: Vec<u32>,
    pub q: u32,
}

impl FieldSpec {
    pub fn new(p: u32, m: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::Field(format!("characteristic {p} is not prime")));
        }
        if m == 0 {
            return Err(Error::Field("extension degree must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= MAX_ORDER).ok_or_else(|| {
            Error::Field(format!("field order {p}^{m} exceeds {MAX_ORDER}"))
        })?;
        if modulus.len() != m as usize + 1 || modulus[m as usize] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::Field(format!("modulus must be monic of degree {m} with digits below {p}")));
        }
        Ok(FieldSpec {
            p,
            m,
            modulus,
            q: q as u32,
        })
    }

    /// The built-in modulus for GF(q), `q` a prime power.
    pub fn for_order(q: u64) -> Result<Self> {
        let (p, m) = prime_power(q).ok_or_else(|| Error::Field(format!("{q} is not a prime power")))?;
        let modulus: Vec<u32> = match (p, m) {
            (_, 1) => vec![0, 1],
            (2, m) if m <= 16 => {
                let bits = BINARY_MODULI[m as usize - 1];
                (0..=m).map(|i| (bits >> i) & 1).collect()
            }
            (3, 2) => vec![2, 1, 1],
            (3, 3) => vec![1, 2, 0, 1],
            (3, 4) => vec![2, 1, 0, 0, 1],
            (5, 2) => vec![2, 1, 1],
            (5, 3) => vec![2, 3, 0, 1],
            (7, 2) => vec![3, 1, 1],
            (7, 3) => vec![2, 3, 0, 1],
            _ => return Err(Error::Field(format!("no built-in modulus for GF({p}^{m})"))),
        };
        FieldSpec::new(p as u32, m, modulus)
    }

    /// The smallest GF(2^m) with at least `size` elements.
    pub fn smallest_binary(size: usize) -> Result<Self> {
        let mut m = 1;
        while (1u64 << m) < size as u64 {
            m += 1;
        }
        FieldSpec::for_order(1 << m)
    }
}

#[derive(Clone, Debug)]
pub struct Field {
    spec: FieldSpec,
    generator: Elem,
    exp: Vec<Elem>,
    log: Vec<u32>,
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        let q = spec.q as usize;
        let order = q - 1;
        let mut found = None;
        for g in 1..q as Elem {
            let mut x = g;
            let mut k = 1;
            while x != 1 && k <= order {
                x = slow_mul(&spec, x, g);
                k += 1;
            }
            if x == 1 && k == order {
                found = Some(g);
                break;
            }
        }
        let generator = found.ok_or_else(|| Error::Field(format!("modulus {:?} is reducible over GF({})", spec.modulus, spec.p)))?;
        let mut exp = vec![0; 2 * order];
        let mut log = vec![0; q];
        let mut x: Elem = 1;
        for i in 0..order {
            exp[i] = x;
            exp[i + order] = x;
            log[x as usize] = i as u32;
            x = slow_mul(&spec, x, generator);
        }
        Ok(Field {
            spec,
            generator,
            exp,
            log,
        })
    }

    pub fn with_order(q: u64) -> Result<Self> {
        Field::new(FieldSpec::for_order(q)?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn order(&self) -> u32 {
        self.spec.q
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.spec.p == 2 {
            return a ^ b;
        }
        digitwise(self.spec.p, a, b, |x, y, p| (x + y) % p)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        if self.spec.p == 2 {
            return a ^ b;
        }
        digitwise(self.spec.p, a, b, |x, y, p| (x + p - y) % p)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::Field("inverse of zero".into()));
        }
        let order = self.order() - 1;
        Ok(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.order() - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % order)) % order) as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: Elem) -> Result<u32> {
        if a == 0 {
            return Err(Error::Field("zero has no multiplicative order".into()));
        }
        let n = self.order() - 1;
        let l = self.log[a as usize];
        Ok(n / gcd(n, l))
    }

    /// Multiplication by polynomial arithmetic, bypassing the tables.
    pub fn mul_reference(&self, a: Elem, b: Elem) -> Elem {
        slow_mul(&self.spec, a, b)
    }

    fn eval_poly(&self, coeffs: &[Elem], x: Elem) -> Elem {
        coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Coefficients (lowest first) of the unique polynomial of degree below
    /// `xs.len()` through the given points.
    fn interpolate(&self, xs: &[Elem], ys: &[Elem]) -> Result<Vec<Elem>> {
        let k = xs.len();
        // master = prod (x - x_i)
        let mut master = vec![1];
        for &xi in xs {
            let mut next = vec![0; master.len() + 1];
            for (d, &c) in master.iter().enumerate() {
                next[d + 1] = self.add(next[d + 1], c);
                next[d] = self.sub(next[d], self.mul(c, xi));
            }
            master = next;
        }
        let mut out = vec![0; k];
        for i in 0..k {
            // quotient of master by (x - x_i), synthetic division from the top
            let mut quot = vec![0; k];
            let mut carry = 0;
            for d in (0..k).rev() {
                carry = self.add(master[d + 1], self.mul(carry, xs[i]));
                quot[d] = carry;
            }
            let denom = self.eval_poly(&quot, xs[i]);
            let w = self.div(ys[i], denom)?;
            for (o, &c) in out.iter_mut().zip(&quot) {
                *o = self.add(*o, self.mul(w, c));
            }
        }
        Ok(out)
    }
}

fn digitwise(p: u32, mut a: u32, mut b: u32, f: impl Fn(u32, u32, u32) -> u32) -> u32 {
    let mut out = 0;
    let mut scale = 1;
    while a > 0 || b > 0 {
        out += f(a % p, b % p, p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

fn to_digits(p: u32, m: usize, mut a: u32) -> Vec<u32> {
    let mut d = vec![0; m];
    for slot in d.iter_mut() {
        *slot = a % p;
        a /= p;
    }
    d
}

fn from_digits(p: u32, d: &[u32]) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn slow_mul(spec: &FieldSpec, a: Elem, b: Elem) -> Elem {
    let (p, m) = (spec.p, spec.m as usize);
    let da = to_digits(p, m, a);
    let db = to_digits(p, m, b);
    let mut prod = vec![0u32; 2 * m];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for d in (m..2 * m).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        // subtract c * x^(d-m) * modulus
        for (i, &mc) in spec.modulus.iter().enumerate() {
            let idx = d - m + i;
            prod[idx] = (prod[idx] + p * p - c * mc % p) % p;
        }
    }
    from_digits(p, &prod[..m])
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, m)` with `q = p^m`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// A `(theta, dim)` Reed-Solomon code evaluating at the field elements
/// `0, 1, .., theta - 1` (integer encoding order).
#[derive(Clone, Debug)]
pub struct MdsCode {
    field: Field,
    theta: usize,
    dim: usize,
    systematic: bool,
}

impl MdsCode {
    pub fn new(field: Field, theta: usize, dim: usize, systematic: bool) -> Result<Self> {
        if dim == 0 || dim > theta {
            return Err(Error::params(format!("MDS dimension {dim} must be in 1..={theta}")));
        }
        if theta as u64 > field.order() as u64 {
            return Err(Error::params(format!(
                "code length {theta} exceeds field order {}",
                field.order()
            )));
        }
        Ok(MdsCode {
            field,
            theta,
            dim,
            systematic,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn systematic(&self) -> bool {
        self.systematic
    }

    fn point(&self, i: usize) -> Elem {
        i as Elem
    }

    pub fn encode(&self, file: &[Elem]) -> Result<Vec<Elem>> {
        if file.len() != self.dim {
            return Err(Error::params(format!(
                "file has {} symbols, code dimension is {}",
                file.len(),
                self.dim
            )));
        }
        let q = self.field.order();
        if let Some(&bad) = file.iter().find(|&&s| s >= q) {
            return Err(Error::Field(format!("symbol {bad} is not an element of GF({q})")));
        }
        let coeffs = if self.systematic {
            let xs: Vec<Elem> = (0..self.dim).map(|i| self.point(i)).collect();
            self.field.interpolate(&xs, file)?
        } else {
            file.to_vec()
        };
        Ok((0..self.theta).map(|i| self.field.eval_poly(&coeffs, self.point(i))).collect())
    }

    /// Erasure decoding from `(coordinate index, value)` pairs.
    pub fn decode(&self, coords: &[(usize, Elem)]) -> Result<Vec<Elem>> {
        let mut sorted = coords.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InconsistentCoordinates);
        }
        if let Some(&(i, _)) = sorted.iter().find(|c| c.0 >= self.theta) {
            return Err(Error::params(format!("coordinate {i} outside the code length {}", self.theta)));
        }
        if sorted.len() < self.dim {
            return Err(Error::InsufficientCoordinates {
                have: sorted.len(),
                need: self.dim,
            });
        }
        let (basis, rest) = sorted.split_at(self.dim);
        let xs: Vec<Elem> = basis.iter().map(|&(i, _)| self.point(i)).collect();
        let ys: Vec<Elem> = basis.iter().map(|&(_, v)| v).collect();
        let coeffs = self.field.interpolate(&xs, &ys)?;
        for &(i, v) in rest {
            if self.field.eval_poly(&coeffs, self.point(i)) != v {
                return Err(Error::InconsistentCoordinates);
            }
        }
        if self.systematic {
            Ok((0..self.dim).map(|i| self.field.eval_poly(&coeffs, self.point(i))).collect())
        } else {
            Ok(coeffs)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gf2_one_plus_one_is_zero() {
        let f = Field::with_order(2).unwrap();
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.mul(1, 1), 1);
    }

    #[test]
    fn gf16_inverses() {
        let f = Field::with_order(16).unwrap();
        for x in 1..16 {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
        }
        assert!(f.inv(0).is_err());
    }

    #[test]
    fn gf256_aes_modulus_has_order_255_element() {
        // x^8 + x^4 + x^3 + x + 1 is irreducible but x has order 51 there
        let spec = FieldSpec::new(2, 8, vec![1, 1, 0, 1, 1, 0, 0, 0, 1]).unwrap();
        let f = Field::new(spec).unwrap();
        assert_eq!(f.element_order(0x02).unwrap(), 51);
        assert_eq!(f.element_order(0x03).unwrap(), 255);
        let mut x = 1;
        let mut k = 0;
        loop {
            x = f.mul(x, 0x03);
            k += 1;
            if x == 1 {
                break;
            }
        }
        assert_eq!(k, 255);
    }

    #[test]
    fn builtin_moduli_give_fields() {
        let orders = (1..=16).map(|m| 1u64 << m).chain([3, 9, 27, 81, 5, 25, 125, 7, 49, 343, 11, 13]);
        for q in orders {
            let f = Field::with_order(q).unwrap_or_else(|e| panic!("GF({q}): {e}"));
            assert_eq!(f.element_order(f.generator()).unwrap(), (q - 1) as u32);
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x + 1)^2 over GF(2)
        let spec = FieldSpec::new(2, 2, vec![1, 0, 1]).unwrap();
        assert!(Field::new(spec).is_err());
    }

    #[test]
    fn tables_agree_with_polynomial_arithmetic() {
        for q in [4u64, 8, 9, 16, 25, 27, 49] {
            let f = Field::with_order(q).unwrap();
            for a in 0..q as Elem {
                for b in 0..q as Elem {
                    assert_eq!(f.mul(a, b), f.mul_reference(a, b), "GF({q}) {a}*{b}");
                }
            }
        }
    }

    #[test]
    fn field_axioms_gf9() {
        let f = Field::with_order(9).unwrap();
        for a in 0..9 {
            assert_eq!(f.add(a, f.neg(a)), 0);
            for b in 0..9 {
                assert_eq!(f.add(a, b), f.add(b, a));
                for c in 0..9 {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(FieldSpec::smallest_binary(16).unwrap().q, 16);
        assert_eq!(FieldSpec::smallest_binary(17).unwrap().q, 32);
        assert_eq!(FieldSpec::smallest_binary(1).unwrap().q, 2);
    }

    #[test]
    fn systematic_prefix_and_identity_rate() {
        let f = Field::with_order(16).unwrap();
        let code = MdsCode::new(f.clone(), 9, 9, true).unwrap();
        let file: Vec<Elem> = (0..9).map(|i| (i * 7 + 3) % 16).collect();
        assert_eq!(code.encode(&file).unwrap(), file);
        let code = MdsCode::new(f, 9, 4, true).unwrap();
        let cw = code.encode(&file[..4]).unwrap();
        assert_eq!(&cw[..4], &file[..4]);
    }

    #[test]
    fn dimension_one_is_repetition() {
        let f = Field::with_order(16).unwrap();
        for systematic in [true, false] {
            let code = MdsCode::new(f.clone(), 7, 1, systematic).unwrap();
            let cw = code.encode(&[11]).unwrap();
            assert!(cw.iter().all(|&v| v == 11));
            for i in 0..7 {
                assert_eq!(code.decode(&[(i, cw[i])]).unwrap(), vec![11]);
            }
        }
    }

    #[test]
    fn insufficient_and_inconsistent_coordinates() {
        let f = Field::with_order(16).unwrap();
        let code = MdsCode::new(f, 9, 7, true).unwrap();
        let cw = code.encode(&[1, 2, 3, 4, 5, 6, 7]).unwrap();
        let coords: Vec<_> = cw.iter().copied().enumerate().collect();
        match code.decode(&coords[..6]) {
            Err(Error::InsufficientCoordinates { have: 6, need: 7 }) => {}
            other => panic!("{other:?}"),
        }
        assert_eq!(code.decode(&coords).unwrap(), vec![1, 2, 3, 4, 5, 6, 7]);
        let mut bad = coords.clone();
        bad[8].1 ^= 1;
        assert!(matches!(code.decode(&bad), Err(Error::InconsistentCoordinates)));
    }

    #[test]
    fn length_checks() {
        let f = Field::with_order(8).unwrap();
        assert!(MdsCode::new(f.clone(), 9, 3, true).is_err());
        let code = MdsCode::new(f, 8, 3, true).unwrap();
        assert!(code.encode(&[1, 2]).is_err());
        assert!(code.encode(&[1, 2, 8]).is_err());
    }

    #[test]
    fn gf16_round_trip_through_random_subsets() {
        let f = Field::with_order(16).unwrap();
        let code = MdsCode::new(f, 16, 11, true).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let file: Vec<Elem> = (0..11).map(|_| rng.random_range(0..16)).collect();
            let cw = code.encode(&file).unwrap();
            let mut idx: Vec<usize> = (0..16).collect();
            for i in 0..11 {
                let j = rng.random_range(i..16);
                idx.swap(i, j);
            }
            let coords: Vec<_> = idx[..11].iter().map(|&i| (i, cw[i])).collect();
            assert_eq!(code.decode(&coords).unwrap(), file);
        }
    }
}
