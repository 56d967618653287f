//! Dense polynomial arithmetic over the prime field F_p, with coefficients
//! stored low-to-high in `Vec<u64>` and no trailing zeros (the zero
//! polynomial is the empty vector).
//!
//! This is the substrate for extension-field arithmetic: elements of
//! F_{p^r} are residues modulo a monic irreducible polynomial of degree r.

pub type Poly = Vec<u64>;

#[inline]
pub fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Degree, or `None` for the zero polynomial.
#[inline]
pub fn deg(f: &[u64]) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn add(f: &[u64], g: &[u64], p: u64) -> Poly {
    let n = f.len().max(g.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        out[i] = (a + b) % p;
    }
    trim(out)
}

pub fn sub(f: &[u64], g: &[u64], p: u64) -> Poly {
    let n = f.len().max(g.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        out[i] = (a + p - b) % p;
    }
    trim(out)
}

pub fn scale(f: &[u64], c: u64, p: u64) -> Poly {
    let c = c % p;
    trim(f.iter().map(|&a| ((a as u128 * c as u128) % p as u128) as u64).collect())
}

pub fn mul(f: &[u64], g: &[u64], p: u64) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u128; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            let cell = &mut acc[i + j];
            *cell += a as u128 * b as u128;
            // p < 2^32, so each product is < 2^64; fold eagerly to stay safe.
            if *cell >= 1u128 << 96 {
                *cell %= p as u128;
            }
        }
    }
    trim(acc.into_iter().map(|c| (c % p as u128) as u64).collect())
}

/// Remainder of `f` modulo a *monic* polynomial `m`.
pub fn rem_monic(f: &[u64], m: &[u64], p: u64) -> Poly {
    debug_assert!(m.last() == Some(&1), "modulus must be monic");
    let md = m.len() - 1;
    let mut r: Poly = f.to_vec();
    while r.len() > md {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - md;
        if lead != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let idx = i + shift;
                let prod = (lead as u128 * mc as u128) % p as u128;
                r[idx] = ((r[idx] as u128 + p as u128 - prod) % p as u128) as u64;
            }
        }
        r.pop();
        while r.last() == Some(&0) && r.len() > md {
            r.pop();
        }
    }
    trim(r)
}

pub fn mul_mod(f: &[u64], g: &[u64], m: &[u64], p: u64) -> Poly {
    rem_monic(&mul(f, g, p), m, p)
}

fn inv_scalar(a: u64, p: u64) -> u64 {
    // Extended Euclid on integers; p prime and a != 0 mod p.
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "inverse of non-unit");
    (t0.rem_euclid(p as i128)) as u64
}

/// Quotient and remainder for a general (nonzero) divisor.
pub fn divrem(f: &[u64], g: &[u64], p: u64) -> (Poly, Poly) {
    let gd = deg(g).expect("division by zero polynomial");
    let glead_inv = inv_scalar(g[gd], p);
    let mut r: Poly = f.to_vec();
    let mut q: Poly = vec![0; f.len().saturating_sub(gd)];
    while let Some(rd) = deg(&r) {
        if rd < gd {
            break;
        }
        let c = ((r[rd] as u128 * glead_inv as u128) % p as u128) as u64;
        let shift = rd - gd;
        q[shift] = c;
        for (i, &gc) in g.iter().enumerate() {
            let prod = (c as u128 * gc as u128) % p as u128;
            r[i + shift] = ((r[i + shift] as u128 + p as u128 - prod) % p as u128) as u64;
        }
        r = trim(r);
    }
    (trim(q), r)
}

/// Monic greatest common divisor.
pub fn gcd(f: &[u64], g: &[u64], p: u64) -> Poly {
    let mut a: Poly = f.to_vec();
    let mut b: Poly = g.to_vec();
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b, p);
        a = b;
        b = r;
    }
    match deg(&a) {
        None => a,
        Some(d) => scale(&a, inv_scalar(a[d], p), p),
    }
}

/// Inverse of `f` modulo the monic irreducible `m` (f nonzero mod m).
pub fn inv_mod(f: &[u64], m: &[u64], p: u64) -> Poly {
    // Extended Euclid: maintain t with t * f = r (mod m).
    let mut r0: Poly = m.to_vec();
    let mut r1: Poly = rem_monic(f, m, p);
    let mut t0: Poly = Vec::new();
    let mut t1: Poly = vec![1];
    assert!(!r1.is_empty(), "inverse of zero residue");
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let t = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
    }
    // r0 is a nonzero constant gcd; scale t0 by its inverse.
    let c = inv_scalar(r0[0], p);
    rem_monic(&scale(&t0, c, p), m, p)
}

/// `x^e` modulo monic `m`, by square-and-multiply.
pub fn x_pow_mod(e: u64, m: &[u64], p: u64) -> Poly {
    pow_mod(&[0, 1], e, m, p)
}

/// `f^e` modulo monic `m`.
pub fn pow_mod(f: &[u64], e: u64, m: &[u64], p: u64) -> Poly {
    let mut base = rem_monic(f, m, p);
    let mut acc: Poly = rem_monic(&[1], m, p);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &base, m, p);
        }
        base = mul_mod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

/// Monic degree-r polynomial irreducible over F_p?  Uses the classical
/// criterion: no irreducible factor of degree s <= r/2, tested via
/// gcd(m, X^{p^s} - X).
pub fn is_irreducible(m: &[u64], p: u64) -> bool {
    let r = match deg(m) {
        Some(r) if r >= 1 => r,
        _ => return false,
    };
    debug_assert_eq!(m[r], 1, "modulus must be monic");
    if r == 1 {
        return true;
    }
    for s in 1..=(r / 2) {
        // p^s fits easily: fields here satisfy p^r within u64 range.
        let ps = (p as u128).pow(s as u32);
        assert!(ps <= u64::MAX as u128, "field too large");
        let xq = x_pow_mod(ps as u64, m, p);
        let g = gcd(m, &sub(&xq, &[0, 1], p), p);
        if deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

pub fn eval(f: &[u64], x: u64, p: u64) -> u64 {
    let mut acc: u128 = 0;
    for &c in f.iter().rev() {
        acc = (acc * x as u128 + c as u128) % p as u128;
    }
    acc as u64
}
