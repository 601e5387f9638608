use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;

/// The cyclotomic field Q(zeta_N), stored as Q[x]/(Phi_N).
pub struct CycloField {
    order: u64,
    phi: usize,
    cyclo: Vec<i64>,
    tail: Vec<(usize, i64)>,
    powers: Vec<OnceLock<Vec<i64>>>,
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for CycloField {}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloField(N={}, deg={})", self.order, self.phi)
    }
}

fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic integer polynomial.
fn poly_div_monic(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quo = vec![0i128; num.len() - dn];
    for i in (dn..num.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        quo[i - dn] = c;
        for (j, d) in den.iter().enumerate() {
            rem[i - dn + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|c| *c == 0));
    quo
}

fn mobius(mut n: u64) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Integer coefficients of the n-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    let mut num = vec![1i128];
    let mut den = vec![1i128];
    let xd_minus_one = |d: u64| {
        let mut v = vec![0i128; d as usize + 1];
        v[0] = -1;
        v[d as usize] = 1;
        v
    };
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        match mobius(n / d) {
            1 => num = poly_mul(&num, &xd_minus_one(d)),
            -1 => den = poly_mul(&den, &xd_minus_one(d)),
            _ => {}
        }
    }
    // den is monic up to sign; normalize so the division is by a monic polynomial.
    let lead = *den.last().unwrap();
    if lead == -1 {
        den.iter_mut().for_each(|c| *c = -*c);
        num.iter_mut().for_each(|c| *c = -*c);
    }
    let q = poly_div_monic(&num, &den);
    q.into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow"))
        .collect()
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

impl CycloField {
    pub fn new(order: u64) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        let cyclo = cyclotomic_polynomial(order);
        let phi = cyclo.len() - 1;
        debug_assert_eq!(phi as u64, totient(order));
        let tail = cyclo[..phi]
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (i, *c))
            .collect();
        let powers = (0..order).map(|_| OnceLock::new()).collect();
        CycloField { order, phi, cyclo, tail, powers }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Degree of the field over Q.
    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn cyclotomic(&self) -> &[i64] {
        &self.cyclo
    }

    /// Nonzero coefficients of Phi_N below its leading term.
    pub(crate) fn tail(&self) -> &[(usize, i64)] {
        &self.tail
    }

    /// Canonical coefficients of zeta^k, trailing zeros trimmed.
    pub fn power(&self, k: i64) -> &[i64] {
        let k = k.mod_floor(&(self.order as i64)) as usize;
        self.powers[k].get_or_init(|| {
            if k < self.phi {
                let mut v = vec![0i64; k + 1];
                v[k] = 1;
                return v;
            }
            let mut p = vec![0i128; k + 1];
            p[k] = 1;
            for i in (self.phi..=k).rev() {
                let c = p[i];
                if c == 0 {
                    continue;
                }
                p[i] = 0;
                for &(j, t) in &self.tail {
                    p[i - self.phi + j] -= c * t as i128;
                }
            }
            p.truncate(self.phi);
            while p.last() == Some(&0) {
                p.pop();
            }
            p.into_iter()
                .map(|c| i64::try_from(c).expect("power coefficient overflow"))
                .collect()
        })
    }
}
