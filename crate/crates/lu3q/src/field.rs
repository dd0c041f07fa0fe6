//! Exact arithmetic in GF(q) for prime powers q = p^t.
//!
//! Elements are encoded as integers in `[0, q)`: the base-p digits of the
//! code are the coefficients of the polynomial residue, constant term in
//! the least significant digit. Code 0 is the additive identity and code 1
//! the multiplicative identity, and the integer-code order of elements is
//! the canonical element order used by every downstream matrix.
//!
//! Fields are intended for desk-scale geometry (q up to a few hundred);
//! all operations are table lookups after construction.

use std::fmt;

/// Error raised when a field cannot be constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    /// The requested order is not p^t for a prime p and t >= 1.
    NotPrimePower(u64),
    /// The order exceeds what the table-backed representation supports.
    TooLarge(u64),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrimePower(q) => write!(f, "{q} is not a prime power"),
            FieldError::TooLarge(q) => {
                write!(
                    f,
                    "field order {q} exceeds the supported maximum {MAX_ORDER}"
                )
            }
        }
    }
}

/// Largest supported field order; the operation tables are q^2 entries.
pub const MAX_ORDER: u32 = 1024;

impl std::error::Error for FieldError {}

/// An element of GF(q), tagged with the field order it belongs to.
///
/// Two elements compare equal only when both code and order agree. The
/// order tag is what lets arithmetic reject elements of mismatched fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq {
    code: u32,
    q: u32,
}

impl Fq {
    /// Integer code in `[0, q)`.
    pub fn code(self) -> u32 {
        self.code
    }

    /// Order of the field this element belongs to.
    pub fn order(self) -> u32 {
        self.q
    }

    pub fn is_zero(self) -> bool {
        self.code == 0
    }

    pub fn is_one(self) -> bool {
        self.code == 1
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

/// GF(q) with precomputed operation tables.
///
/// Construction is deterministic: for extension fields the modulus is the
/// lexicographically smallest monic irreducible polynomial of degree t over
/// GF(p), comparing coefficient tuples `(c_{t-1}, ..., c_0)` in ascending
/// order. Two fields of the same order are therefore identical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    p: u32,
    t: u32,
    q: u32,
    /// Monic modulus of degree t, constant term first; `[0, 1]` for t = 1.
    modulus: Vec<u32>,
    add_tab: Vec<u32>,
    mul_tab: Vec<u32>,
    neg_tab: Vec<u32>,
    inv_tab: Vec<u32>,
}

impl Field {
    /// Builds GF(q), rejecting q that is not a prime power.
    pub fn new(q: u32) -> Result<Field, FieldError> {
        let (p, t) = factor_prime_power(q).ok_or(FieldError::NotPrimePower(q as u64))?;
        if q > MAX_ORDER {
            return Err(FieldError::TooLarge(q as u64));
        }
        let modulus = if t == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, t)
        };

        let tu = t as usize;
        let qu = q as usize;

        // Digit expansion of every code, reused while filling the tables.
        let digits: Vec<Vec<u32>> = (0..q).map(|c| to_digits(c, p, tu)).collect();

        let mut add_tab = vec![0u32; qu * qu];
        let mut mul_tab = vec![0u32; qu * qu];
        for a in 0..qu {
            for b in 0..qu {
                let sum: Vec<u32> = (0..tu).map(|i| (digits[a][i] + digits[b][i]) % p).collect();
                add_tab[a * qu + b] = from_digits(&sum, p);

                let mut prod = vec![0u32; 2 * tu - 1];
                for i in 0..tu {
                    for j in 0..tu {
                        prod[i + j] = (prod[i + j] + digits[a][i] * digits[b][j]) % p;
                    }
                }
                poly_reduce(&mut prod, &modulus, p);
                mul_tab[a * qu + b] = from_digits(&prod[..tu], p);
            }
        }

        let mut neg_tab = vec![0u32; qu];
        for a in 0..qu {
            let d: Vec<u32> = (0..tu).map(|i| (p - digits[a][i]) % p).collect();
            neg_tab[a] = from_digits(&d, p);
        }

        let mut inv_tab = vec![0u32; qu];
        for a in 1..qu {
            for b in 1..qu {
                if mul_tab[a * qu + b] == 1 {
                    inv_tab[a] = b as u32;
                    break;
                }
            }
            debug_assert!(
                inv_tab[a] != 0,
                "no inverse found; modulus not irreducible?"
            );
        }

        Ok(Field {
            p,
            t,
            q,
            modulus,
            add_tab,
            mul_tab,
            neg_tab,
            inv_tab,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.t
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Element with the given integer code.
    pub fn element(&self, code: u32) -> Fq {
        assert!(code < self.q, "code {code} out of range for GF({})", self.q);
        Fq { code, q: self.q }
    }

    pub fn zero(&self) -> Fq {
        Fq { code: 0, q: self.q }
    }

    pub fn one(&self) -> Fq {
        Fq { code: 1, q: self.q }
    }

    /// All q elements in ascending code order; the element with code k sits
    /// at position k.
    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        (0..self.q).map(move |code| Fq { code, q: self.q })
    }

    fn check(&self, a: Fq) {
        assert!(
            a.q == self.q,
            "element of GF({}) used with GF({})",
            a.q,
            self.q
        );
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        self.check(a);
        self.check(b);
        Fq {
            code: self.add_tab[(a.code * self.q + b.code) as usize],
            q: self.q,
        }
    }

    pub fn neg(&self, a: Fq) -> Fq {
        self.check(a);
        Fq {
            code: self.neg_tab[a.code as usize],
            q: self.q,
        }
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        self.check(a);
        self.check(b);
        Fq {
            code: self.mul_tab[(a.code * self.q + b.code) as usize],
            q: self.q,
        }
    }

    /// Multiplicative inverse; the zero element has none.
    pub fn inv(&self, a: Fq) -> Fq {
        self.check(a);
        assert!(a.code != 0, "inverse of zero in GF({})", self.q);
        Fq {
            code: self.inv_tab[a.code as usize],
            q: self.q,
        }
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        self.check(a);
        let mut base = a;
        let mut e = e;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Returns (p, t) with q = p^t, p prime, t >= 1; None otherwise.
pub(crate) fn factor_prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 0;
    for d in 2..=q {
        if d * d > q {
            p = q; // q itself is prime
            break;
        }
        if q.is_multiple_of(d) {
            p = d;
            break;
        }
    }
    let mut rest = q;
    let mut t = 0;
    while rest > 1 {
        if !rest.is_multiple_of(p) {
            return None;
        }
        rest /= p;
        t += 1;
    }
    Some((p, t))
}

fn to_digits(code: u32, p: u32, t: usize) -> Vec<u32> {
    let mut d = vec![0u32; t];
    let mut c = code;
    for digit in d.iter_mut() {
        *digit = c % p;
        c /= p;
    }
    d
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Reduces `poly` (dense, constant first) modulo the monic `modulus` over GF(p).
fn poly_reduce(poly: &mut Vec<u32>, modulus: &[u32], p: u32) {
    let t = modulus.len() - 1;
    while poly.len() > t {
        let lead = *poly.last().unwrap();
        let deg = poly.len() - 1;
        if lead != 0 {
            for i in 0..t {
                let sub = (lead * modulus[i]) % p;
                let idx = deg - t + i;
                poly[idx] = (poly[idx] + p * p - sub) % p;
            }
        }
        poly.pop();
    }
    while poly.len() < t {
        poly.push(0);
    }
}

/// Remainder of `a` divided by monic `b`, both dense constant-first over GF(p).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let deg = r.len() - 1;
        if lead != 0 {
            // b is monic
            for i in 0..db {
                let idx = deg - db + i;
                r[idx] = (r[idx] + p * p - (lead * b[i]) % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let t = f.len() - 1;
    // A monic polynomial of degree t is reducible iff it has a monic factor
    // of degree 1..=t/2.
    for d in 1..=t / 2 {
        let count = (p as u64).pow(d as u32);
        for k in 0..count {
            let mut g: Vec<u32> = Vec::with_capacity(d + 1);
            let mut kk = k;
            for _ in 0..d {
                g.push((kk % p as u64) as u32);
                kk /= p as u64;
            }
            g.push(1); // monic
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree t over GF(p),
/// comparing `(c_{t-1}, ..., c_0)` ascending.
fn smallest_irreducible(p: u32, t: u32) -> Vec<u32> {
    let tu = t as usize;
    let count = (p as u64).pow(t);
    for k in 0..count {
        // Base-p digits of k, least significant = c_0, so ascending k walks
        // the tuples (c_{t-1}, ..., c_0) in ascending lexicographic order.
        let mut f = vec![0u32; tu];
        let mut kk = k;
        for c in f.iter_mut() {
            *c = (kk % p as u64) as u32;
            kk /= p as u64;
        }
        f.push(1); // monic x^t
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}
