//! Positive real root counting by Descartes' rule of signs with bisection
//! (Vincent–Collins–Akritas), kept independent of the library's Sturm code.

use num::{BigRational, Signed, Zero};

type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn derivative(p: &[BigRational]) -> Poly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(i.into()))
        .collect()
}

fn rem(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut r = a.to_vec();
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let q = r.last().unwrap() / &lb;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &q * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn div_exact(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut r = a.to_vec();
    let lb = b.last().unwrap().clone();
    let mut q = vec![BigRational::zero(); a.len() + 1 - b.len()];
    while r.len() >= b.len() {
        let c = r.last().unwrap() / &lb;
        let shift = r.len() - b.len();
        for (i, d) in b.iter().enumerate() {
            r[shift + i] -= &c * d;
        }
        q[shift] = c;
        r.pop();
    }
    q
}

fn gcd(a: &[BigRational], b: &[BigRational]) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn variations(p: &[BigRational]) -> usize {
    let signs: Vec<bool> = p.iter().filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// q(x) = p(x + a)
fn taylor_shift(p: &[BigRational], a: &BigRational) -> Poly {
    let mut q = p.to_vec();
    let n = q.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &q[j + 1] * a;
            q[j] += t;
        }
    }
    q
}

/// Upper bound on the variations of p over (0, 1), exact when 0 or 1.
fn descartes_unit(p: &[BigRational]) -> usize {
    let mut rev: Poly = p.iter().rev().cloned().collect();
    rev = taylor_shift(&rev, &BigRational::from_integer(1.into()));
    variations(&rev)
}

/// p(a + (b - a) x)
fn rescale(p: &[BigRational], a: &BigRational, b: &BigRational) -> Poly {
    let shifted = taylor_shift(p, a);
    let w = b - a;
    let mut f = BigRational::from_integer(1.into());
    shifted
        .into_iter()
        .map(|c| {
            let out = c * &f;
            f *= &w;
            out
        })
        .collect()
}

fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn count_in(p: &[BigRational], a: BigRational, b: BigRational) -> usize {
    let v = descartes_unit(&rescale(p, &a, &b));
    if v <= 1 {
        return v;
    }
    let mid = (&a + &b) / BigRational::from_integer(2.into());
    let at_mid = usize::from(eval(p, &mid).is_zero());
    count_in(p, a, mid.clone()) + at_mid + count_in(p, mid, b)
}

/// Number of distinct roots in (0, ∞). `p` holds ascending coefficients.
pub fn positive_root_count(p: &[BigRational]) -> usize {
    let p = trim(p.to_vec());
    assert!(!p.is_empty(), "zero polynomial");
    let g = gcd(&p, &derivative(&p));
    let mut sf = div_exact(&p, &g);
    while sf.first().is_some_and(|c| c.is_zero()) {
        sf.remove(0);
    }
    if sf.len() <= 1 {
        return 0;
    }
    let lead = sf.last().unwrap().abs();
    let bound = sf[..sf.len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .fold(BigRational::zero(), |m, c| if c > m { c } else { m })
        + BigRational::from_integer(1.into());
    count_in(&sf, BigRational::zero(), bound)
}
