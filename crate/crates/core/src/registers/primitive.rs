//! Primitive feedback sets for lengths 8..=32.
//!
//! Each entry lists the nonzero lower exponents `e` of a primitive polynomial
//! x^L + sum x^e + 1. The register recurrence x_{L+1+t} = sum_{p in F} x_{p+t}
//! has characteristic polynomial x^L + sum_{p in F} x^(p-1), so the feedback
//! set is {1} together with {e + 1}.

const TABLE: &[(usize, &[usize])] = &[
    (8, &[6, 5, 4]),
    (9, &[5]),
    (10, &[7]),
    (11, &[9]),
    (12, &[6, 4, 1]),
    (13, &[4, 3, 1]),
    (14, &[5, 3, 1]),
    (15, &[14]),
    (16, &[15, 13, 4]),
    (17, &[14]),
    (18, &[11]),
    (19, &[6, 2, 1]),
    (20, &[17]),
    (21, &[19]),
    (22, &[21]),
    (23, &[18]),
    (24, &[23, 22, 17]),
    (25, &[22]),
    (26, &[6, 2, 1]),
    (27, &[5, 2, 1]),
    (28, &[25]),
    (29, &[27]),
    (30, &[6, 4, 1]),
    (31, &[28]),
    (32, &[22, 2, 1]),
];

pub fn supported_lengths() -> impl Iterator<Item = usize> {
    TABLE.iter().map(|&(l, _)| l)
}

pub fn feedback_for(length: usize) -> Option<Vec<usize>> {
    TABLE.iter().find(|&&(l, _)| l == length).map(|&(_, ex)| {
        let mut f = vec![1];
        f.extend(ex.iter().map(|&e| e + 1));
        f.sort_unstable();
        f
    })
}

fn mulmod(a: u64, b: u64, poly: u64, deg: u32) -> u64 {
    let mut acc: u128 = 0;
    let mut b = b;
    let mut sh = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= (a as u128) << sh;
        }
        b >>= 1;
        sh += 1;
    }
    let p = poly as u128;
    for bit in (deg as usize..128).rev() {
        if (acc >> bit) & 1 == 1 {
            acc ^= p << (bit - deg as usize);
        }
    }
    acc as u64
}

fn powmod_x(e: u64, poly: u64, deg: u32) -> u64 {
    let mut result = 1u64;
    let mut base = mulmod(2, 1, poly, deg);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(result, base, poly, deg);
        }
        base = mulmod(base, base, poly, deg);
        e >>= 1;
    }
    result
}

fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= v {
        if v % d == 0 {
            out.push(d);
            while v % d == 0 {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

/// True iff the register with this feedback set has maximal period 2^L - 1.
pub fn is_primitive(length: usize, feedback: &[usize]) -> bool {
    if length == 0 || length > 32 || !feedback.contains(&1) {
        return false;
    }
    let deg = length as u32;
    let mut poly = 1u64 << deg;
    for &p in feedback {
        if p == 0 || p > length {
            return false;
        }
        poly ^= 1u64 << (p - 1);
    }
    let order = (1u64 << deg) - 1;
    if powmod_x(order, poly, deg) != 1 {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|q| powmod_x(order / q, poly, deg) != 1)
}
