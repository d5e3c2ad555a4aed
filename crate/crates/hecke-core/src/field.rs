//! Exact scalar arithmetic over the two coefficient domains used throughout:
//! the cyclotomic field Q(zeta_l) realized as Q[z]/(Phi_l), and GF(p^k)
//! realized as F_p[z]/(m) for a deterministically chosen irreducible m.
//! Each `Field` fixes a primitive l-th root of unity `q`, verified to have
//! exact multiplicative order l at construction time.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Serializable description of a coefficient field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Cyclotomic { l: u32 },
    Finite { l: u32, p: u32, k: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Cyclotomic,
    Finite,
}

/// A scalar in canonical form. `Rat` holds coefficients of 1, z, z^2, ...
/// with trailing zeros trimmed and degree below deg Phi_l; `Fin` packs the
/// F_p digits of a residue as sum c_i p^i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Rat(Vec<BigRational>),
    Fin(u32),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(c) => c.is_empty(),
            Scalar::Fin(x) => *x == 0,
        }
    }
}

/// Coefficient field with a distinguished primitive l-th root of unity.
#[derive(Clone, Debug)]
pub struct Field {
    kind: FieldKind,
    l: u32,
    // cyclotomic data: Phi_l, monic with integer coefficients
    phi: Vec<BigInt>,
    // finite data: modulus is monic of degree k, digit vectors low-to-high
    p: u32,
    k: u32,
    modulus: Vec<u32>,
    q: Scalar,
    q_inv: Scalar,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.l == other.l && self.p == other.p && self.k == other.k
    }
}
impl Eq for Field {}

// ---- integer polynomial helpers (for Phi_l) ----

fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic divisor; panics if the division is not exact,
/// which cannot happen for the cyclotomic recursion.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one());
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for d in (dd..rem.len()).rev() {
        let c = rem[d].clone();
        if !c.is_zero() {
            quot[d - dd] = c.clone();
            for (i, dc) in den.iter().enumerate() {
                let v = &c * dc;
                rem[d - dd + i] -= v;
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

/// Phi_n computed by dividing z^n - 1 by the product of Phi_d over proper
/// divisors d of n.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    let mut memo: Vec<Vec<BigInt>> = Vec::with_capacity(n as usize + 1);
    memo.push(Vec::new()); // unused slot 0
    for m in 1..=n {
        let mut num = vec![BigInt::zero(); m as usize + 1];
        num[0] = -BigInt::one();
        num[m as usize] = BigInt::one();
        let mut den = vec![BigInt::one()];
        for d in 1..m {
            if m % d == 0 {
                den = int_poly_mul(&den, &memo[d as usize]);
            }
        }
        memo.push(int_poly_div_exact(&num, &den));
    }
    memo.pop().unwrap()
}

// ---- rational polynomial helpers ----

fn rat_trim(c: &mut Vec<BigRational>) {
    while c.last().map(|x| x.is_zero()).unwrap_or(false) {
        c.pop();
    }
}

fn rat_reduce(c: &mut Vec<BigRational>, phi: &[BigInt]) {
    let dp = phi.len() - 1;
    while c.len() > dp {
        let d = c.len() - 1;
        let lead = c[d].clone();
        if !lead.is_zero() {
            for (i, pc) in phi.iter().enumerate() {
                let delta = &lead * BigRational::from(pc.clone());
                c[d - dp + i] -= delta;
            }
        }
        c.pop();
    }
    rat_trim(c);
}

fn rat_poly_divmod(
    num: &[BigRational],
    den: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = num.to_vec();
    rat_trim(&mut rem);
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    if rem.len() <= dd {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    while rem.len() > dd {
        let d = rem.len() - 1;
        let c = &rem[d] / &lead;
        if !c.is_zero() {
            quot[d - dd] = c.clone();
            for (i, dc) in den.iter().enumerate() {
                let delta = &c * dc;
                rem[d - dd + i] -= delta;
            }
        }
        rem.pop();
        rat_trim(&mut rem);
    }
    (quot, rem)
}

// ---- finite field digit helpers ----

fn fin_decode(mut x: u32, p: u32, out: &mut [u32]) {
    for slot in out.iter_mut() {
        *slot = x % p;
        x /= p;
    }
    debug_assert_eq!(x, 0);
}

fn fin_encode(digits: &[u32], p: u32) -> u32 {
    let mut acc: u64 = 0;
    for &d in digits.iter().rev() {
        acc = acc * p as u64 + d as u64;
    }
    acc as u32
}

fn modpow_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// F_p[z] arithmetic on digit vectors, low-to-high, used only during field
// construction; runtime arithmetic goes through the packed representation.

fn fp_poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_poly_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u64) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p;
        }
    }
    // reduce by monic f
    let df = f.len() - 1;
    let mut d = out.len();
    while d > df {
        d -= 1;
        let c = out[d];
        if c != 0 {
            for (i, &fc) in f.iter().enumerate() {
                let idx = d - df + i;
                let sub = c * fc as u64 % p;
                out[idx] = (out[idx] + p - sub % p) % p;
            }
        }
    }
    let mut res: Vec<u32> = out.iter().take(df).map(|&x| x as u32).collect();
    fp_poly_trim(&mut res);
    res
}

fn fp_poly_powmod(a: &[u32], mut e: u64, f: &[u32], p: u64) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_poly_mulmod(&acc, &base, f, p);
        }
        base = fp_poly_mulmod(&base, &base, f, p);
        e >>= 1;
    }
    acc
}

fn fp_poly_gcd(mut a: Vec<u32>, mut b: Vec<u32>, p: u64) -> Vec<u32> {
    fp_poly_trim(&mut a);
    fp_poly_trim(&mut b);
    while !b.is_empty() {
        // a mod b
        let db = b.len() - 1;
        let lead_inv = modpow_u64(b[db] as u64, p - 2, p);
        while a.len() > db {
            let da = a.len() - 1;
            let c = a[da] as u64 * lead_inv % p;
            if c != 0 {
                for (i, &bc) in b.iter().enumerate() {
                    let idx = da - db + i;
                    let sub = c * bc as u64 % p;
                    a[idx] = ((a[idx] as u64 + p - sub) % p) as u32;
                }
            }
            fp_poly_trim(&mut a);
            if a.len() <= db {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Rabin irreducibility test for a monic polynomial of degree k over F_p.
fn fp_poly_irreducible(f: &[u32], p: u64) -> bool {
    let k = (f.len() - 1) as u32;
    let x = vec![0u32, 1];
    // frob[j] = z^(p^j) mod f
    let mut frob = x.clone();
    let mut stages: Vec<Vec<u32>> = vec![x.clone()];
    for _ in 1..=k {
        frob = fp_poly_powmod(&frob, p, f, p);
        stages.push(frob.clone());
    }
    if stages[k as usize] != x {
        return false;
    }
    for t in prime_factors(k as u64) {
        let j = (k as u64 / t) as usize;
        // gcd(z^(p^j) - z, f) must be constant
        let mut diff = stages[j].clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = ((diff[1] as u64 + p - 1) % p) as u32;
        fp_poly_trim(&mut diff);
        let g = fp_poly_gcd(diff, f.to_vec(), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

impl Field {
    pub fn cyclotomic(l: u32) -> Result<Field> {
        if l < 2 {
            return Err(Error::FieldConstruction(format!(
                "root-of-unity order must be at least 2, got {l}"
            )));
        }
        let phi = cyclotomic_polynomial(l);
        let mut f = Field {
            kind: FieldKind::Cyclotomic,
            l,
            phi,
            p: 0,
            k: 0,
            modulus: Vec::new(),
            q: Scalar::Rat(Vec::new()),
            q_inv: Scalar::Rat(Vec::new()),
        };
        let mut zc = vec![BigRational::zero(), BigRational::one()];
        rat_reduce(&mut zc, &f.phi);
        let q = Scalar::Rat(zc);
        f.q_inv = f.inv(&q)?;
        f.q = q;
        f.check_root_order()?;
        Ok(f)
    }

    pub fn finite(p: u32, k: u32, l: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::FieldConstruction(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::FieldConstruction("extension degree must be positive".into()));
        }
        let size = (p as u64).checked_pow(k).filter(|&s| s <= 1 << 16).ok_or_else(|| {
            Error::FieldConstruction(format!("field size {p}^{k} exceeds 2^16"))
        })?;
        if l < 2 {
            return Err(Error::FieldConstruction(format!(
                "root-of-unity order must be at least 2, got {l}"
            )));
        }
        if (size - 1) % l as u64 != 0 {
            return Err(Error::FieldConstruction(format!(
                "GF({p}^{k}) has no primitive {l}-th root of unity: {l} does not divide {}",
                size - 1
            )));
        }
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            let mut found = None;
            for code in 0..size as u32 {
                let mut digits = vec![0u32; k as usize + 1];
                fin_decode(code, p, &mut digits[..k as usize]);
                digits[k as usize] = 1;
                if digits[0] == 0 {
                    continue;
                }
                if fp_poly_irreducible(&digits, p as u64) {
                    found = Some(digits);
                    break;
                }
            }
            found.ok_or_else(|| {
                Error::FieldConstruction(format!("no irreducible modulus of degree {k} over F_{p}"))
            })?
        };
        let mut f = Field {
            kind: FieldKind::Finite,
            l,
            phi: Vec::new(),
            p,
            k,
            modulus,
            q: Scalar::Fin(0),
            q_inv: Scalar::Fin(0),
        };
        let n = size - 1;
        let e = n / l as u64;
        let mut root = None;
        'search: for g in 2..size as u32 {
            let cand = f.fin_pow_code(g, e);
            if cand == 1 {
                continue;
            }
            for t in prime_factors(l as u64) {
                if f.fin_pow_code(cand, (l as u64) / t) == 1 {
                    continue 'search;
                }
            }
            root = Some(cand);
            break;
        }
        let qc = root.ok_or_else(|| {
            Error::FieldConstruction(format!("no element of order {l} found in GF({p}^{k})"))
        })?;
        f.q = Scalar::Fin(qc);
        f.q_inv = f.inv(&f.q.clone())?;
        f.check_root_order()?;
        Ok(f)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Field> {
        match spec {
            FieldSpec::Cyclotomic { l } => Field::cyclotomic(*l),
            FieldSpec::Finite { l, p, k } => Field::finite(*p, *k, *l),
        }
    }

    pub fn spec(&self) -> FieldSpec {
        match self.kind {
            FieldKind::Cyclotomic => FieldSpec::Cyclotomic { l: self.l },
            FieldKind::Finite => FieldSpec::Finite { l: self.l, p: self.p, k: self.k },
        }
    }

    /// Confirms by enumeration that q^m != 1 for 0 < m < l and q^l = 1.
    fn check_root_order(&self) -> Result<()> {
        let mut acc = self.one();
        for m in 1..=self.l {
            acc = self.mul(&acc, &self.q);
            let is_one = acc == self.one();
            if m < self.l && is_one {
                return Err(Error::FieldConstruction(format!(
                    "chosen root has order dividing {m}, expected exact order {}",
                    self.l
                )));
            }
            if m == self.l && !is_one {
                return Err(Error::FieldConstruction(format!(
                    "chosen root does not have order {}",
                    self.l
                )));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn root_order(&self) -> u32 {
        self.l
    }

    pub fn characteristic(&self) -> u32 {
        match self.kind {
            FieldKind::Cyclotomic => 0,
            FieldKind::Finite => self.p,
        }
    }

    fn fin_pow_code(&self, base: u32, e: u64) -> u32 {
        match self.pow(&Scalar::Fin(base), e as i64) {
            Ok(Scalar::Fin(c)) => c,
            _ => unreachable!(),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self.kind {
            FieldKind::Cyclotomic => Scalar::Rat(Vec::new()),
            FieldKind::Finite => Scalar::Fin(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self.kind {
            FieldKind::Cyclotomic => Scalar::Rat(vec![BigRational::one()]),
            FieldKind::Finite => Scalar::Fin(1),
        }
    }

    pub fn q(&self) -> Scalar {
        self.q.clone()
    }

    pub fn q_inv(&self) -> Scalar {
        self.q_inv.clone()
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self.kind {
            FieldKind::Cyclotomic => {
                let mut c = vec![BigRational::from(BigInt::from(v))];
                rat_trim(&mut c);
                Scalar::Rat(c)
            }
            FieldKind::Finite => {
                let p = self.p as i64;
                let r = ((v % p) + p) % p;
                Scalar::Fin(r as u32)
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => {
                let mut out = vec![BigRational::zero(); x.len().max(y.len())];
                for (i, c) in x.iter().enumerate() {
                    out[i] += c;
                }
                for (i, c) in y.iter().enumerate() {
                    out[i] += c;
                }
                rat_trim(&mut out);
                Scalar::Rat(out)
            }
            (Scalar::Fin(x), Scalar::Fin(y)) => {
                let kk = self.k as usize;
                let mut dx = vec![0u32; kk];
                let mut dy = vec![0u32; kk];
                fin_decode(*x, self.p, &mut dx);
                fin_decode(*y, self.p, &mut dy);
                for i in 0..kk {
                    dx[i] = (dx[i] + dy[i]) % self.p;
                }
                Scalar::Fin(fin_encode(&dx, self.p))
            }
            _ => panic!("scalar backend mismatch"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Rat(x) => Scalar::Rat(x.iter().map(|c| -c).collect()),
            Scalar::Fin(x) => {
                let kk = self.k as usize;
                let mut dx = vec![0u32; kk];
                fin_decode(*x, self.p, &mut dx);
                for d in dx.iter_mut() {
                    *d = (self.p - *d) % self.p;
                }
                Scalar::Fin(fin_encode(&dx, self.p))
            }
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => {
                if x.is_empty() || y.is_empty() {
                    return self.zero();
                }
                let mut out = vec![BigRational::zero(); x.len() + y.len() - 1];
                for (i, c) in x.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (j, d) in y.iter().enumerate() {
                        out[i + j] += c * d;
                    }
                }
                rat_reduce(&mut out, &self.phi);
                Scalar::Rat(out)
            }
            (Scalar::Fin(x), Scalar::Fin(y)) => {
                let kk = self.k as usize;
                let mut dx = vec![0u32; kk];
                let mut dy = vec![0u32; kk];
                fin_decode(*x, self.p, &mut dx);
                fin_decode(*y, self.p, &mut dy);
                fp_poly_trim(&mut dx);
                fp_poly_trim(&mut dy);
                let prod = if dx.is_empty() || dy.is_empty() {
                    Vec::new()
                } else {
                    fp_poly_mulmod(&dx, &dy, &self.modulus, self.p as u64)
                };
                let mut digits = vec![0u32; kk];
                digits[..prod.len()].copy_from_slice(&prod);
                Scalar::Fin(fin_encode(&digits, self.p))
            }
            _ => panic!("scalar backend mismatch"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match a {
            Scalar::Rat(x) => {
                // extended Euclid in Q[z] against Phi_l
                let phi: Vec<BigRational> =
                    self.phi.iter().map(|c| BigRational::from(c.clone())).collect();
                let mut r0 = phi;
                let mut s0: Vec<BigRational> = Vec::new();
                let mut r1 = x.clone();
                let mut s1 = vec![BigRational::one()];
                while r1.len() > 1 {
                    let (quot, rem) = rat_poly_divmod(&r0, &r1);
                    // s2 = s0 - quot*s1
                    let mut qs = if quot.is_empty() || s1.is_empty() {
                        Vec::new()
                    } else {
                        let mut t = vec![BigRational::zero(); quot.len() + s1.len() - 1];
                        for (i, c) in quot.iter().enumerate() {
                            for (j, d) in s1.iter().enumerate() {
                                t[i + j] += c * d;
                            }
                        }
                        t
                    };
                    let mut s2 = vec![BigRational::zero(); s0.len().max(qs.len())];
                    for (i, c) in s0.iter().enumerate() {
                        s2[i] += c;
                    }
                    for (i, c) in qs.drain(..).enumerate() {
                        s2[i] -= c;
                    }
                    rat_trim(&mut s2);
                    r0 = r1;
                    s0 = s1;
                    r1 = rem;
                    s1 = s2;
                }
                if r1.is_empty() {
                    return Err(Error::DivisionByZero);
                }
                let c = r1[0].clone();
                let mut out: Vec<BigRational> = s1.iter().map(|v| v / &c).collect();
                rat_reduce(&mut out, &self.phi);
                Ok(Scalar::Rat(out))
            }
            Scalar::Fin(_) => {
                let size = (self.p as u64).pow(self.k);
                self.pow(a, (size - 2) as i64)
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Scalar, e: i64) -> Result<Scalar> {
        if e < 0 {
            let inv = self.inv(a)?;
            return self.pow(&inv, -e);
        }
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// (-q)^e for any integer e; q is invertible so this never fails.
    pub fn minus_q_pow(&self, e: i64) -> Scalar {
        let mq = self.neg(&self.q);
        self.pow(&mq, e).expect("q is invertible")
    }

    pub fn q_pow(&self, e: i64) -> Scalar {
        self.pow(&self.q, e).expect("q is invertible")
    }

    // ---- textual encoding ----

    pub fn render(&self, s: &Scalar) -> String {
        let terms: Vec<(usize, String, bool)> = match s {
            Scalar::Rat(c) => c
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| {
                    let neg = v.is_negative();
                    let a = v.abs();
                    let body = if a.denom().is_one() {
                        a.numer().to_string()
                    } else {
                        format!("{}/{}", a.numer(), a.denom())
                    };
                    (i, body, neg)
                })
                .collect(),
            Scalar::Fin(x) => {
                let kk = self.k as usize;
                let mut d = vec![0u32; kk];
                fin_decode(*x, self.p, &mut d);
                d.iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, v)| **v != 0)
                    .map(|(i, v)| (i, v.to_string(), false))
                    .collect()
            }
        };
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (pos, (deg, body, neg)) in terms.iter().enumerate() {
            if pos == 0 {
                if *neg {
                    out.push('-');
                }
            } else if *neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let coef_is_one = body == "1";
            match (deg, coef_is_one) {
                (0, _) => out.push_str(body),
                (1, true) => out.push('z'),
                (1, false) => {
                    out.push_str(body);
                    out.push_str("*z");
                }
                (d, true) => out.push_str(&format!("z^{d}")),
                (d, false) => out.push_str(&format!("{body}*z^{d}")),
            }
        }
        out
    }

    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        // split into signed terms
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut sign = false;
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i == 0 {
                sign = ch == '-';
            } else if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('^') {
                terms.push((sign, std::mem::take(&mut cur)));
                sign = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(Error::Parse(format!("dangling sign in {text:?}")));
        }
        terms.push((sign, cur));

        let mut acc: Vec<(usize, BigRational)> = Vec::new();
        for (neg, term) in terms {
            let (coef_str, deg) = if let Some(pos) = term.find('z') {
                let before = &term[..pos];
                let after = &term[pos + 1..];
                let deg = if after.is_empty() {
                    1usize
                } else if let Some(e) = after.strip_prefix('^') {
                    e.parse::<usize>().map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?
                } else {
                    return Err(Error::Parse(format!("unexpected trailing {after:?}")));
                };
                let cs = before.strip_suffix('*').unwrap_or(before);
                (if cs.is_empty() { "1".to_string() } else { cs.to_string() }, deg)
            } else {
                (term.clone(), 0usize)
            };
            if deg > 1 << 12 {
                return Err(Error::Parse(format!("exponent too large in {term:?}")));
            }
            let rat = if let Some((n, d)) = coef_str.split_once('/') {
                let n: BigInt = n.parse().map_err(|_| Error::Parse(format!("bad numerator {n:?}")))?;
                let d: BigInt = d.parse().map_err(|_| Error::Parse(format!("bad denominator {d:?}")))?;
                if d.is_zero() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                BigRational::new(n, d)
            } else {
                let n: BigInt =
                    coef_str.parse().map_err(|_| Error::Parse(format!("bad coefficient {coef_str:?}")))?;
                BigRational::from(n)
            };
            let rat = if neg { -rat } else { rat };
            acc.push((deg, rat));
        }

        match self.kind {
            FieldKind::Cyclotomic => {
                let top = acc.iter().map(|(d, _)| *d).max().unwrap_or(0);
                let mut c = vec![BigRational::zero(); top + 1];
                for (d, v) in acc {
                    c[d] += v;
                }
                rat_reduce(&mut c, &self.phi);
                Ok(Scalar::Rat(c))
            }
            FieldKind::Finite => {
                let mut s = self.zero();
                let z = if self.k == 1 { self.zero() } else { Scalar::Fin(self.p) };
                for (d, v) in acc {
                    if !v.denom().is_one() {
                        return Err(Error::Parse("fractional coefficient in finite field scalar".into()));
                    }
                    let p = BigInt::from(self.p);
                    let r = ((v.numer() % &p) + &p) % &p;
                    let digits: Vec<u32> = r.to_u32_digits().1;
                    let coef = Scalar::Fin(*digits.first().unwrap_or(&0));
                    if d > 0 && self.k == 1 {
                        return Err(Error::Parse("no transcendental over a prime field".into()));
                    }
                    let zp = self.pow(&z, d as i64).expect("power of z");
                    s = self.add(&s, &self.mul(&coef, &zp));
                }
                Ok(s)
            }
        }
    }
}

/// [m]_u = 1 + u + ... + u^(m-1); in particular [0]_u = 0.
pub fn quantum_integer(field: &Field, m: u32, u: &Scalar) -> Scalar {
    let mut acc = field.zero();
    let mut pw = field.one();
    for _ in 0..m {
        acc = field.add(&acc, &pw);
        pw = field.mul(&pw, u);
    }
    acc
}

/// [r]_u! = [1]_u [2]_u ... [r]_u, with the empty product equal to 1.
pub fn quantum_factorial(field: &Field, r: u32, u: &Scalar) -> Scalar {
    let mut acc = field.one();
    for m in 1..=r {
        acc = field.mul(&acc, &quantum_integer(field, m, u));
    }
    acc
}
