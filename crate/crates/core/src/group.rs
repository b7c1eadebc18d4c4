//! The group of the walk, generated by the two birational involutions that
//! preserve the step-set Laurent polynomial `Σ δ_{i,j} x^i y^j`.
//!
//! Group elements are never built symbolically. Each word is applied to a
//! panel of random rational points in exact arithmetic, and the identity is
//! certified only when every panel point is fixed exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stepset::StepSet;

pub const DEFAULT_MAX_HALF_ORDER: usize = 16;
const PANEL_SIZE: usize = 5;
const MAX_RETRIES: usize = 20;
const MAX_HEIGHT: i64 = 100;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl RationalPoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        RationalPoint { x, y }
    }

    /// Convenience constructor from `(xn/xd, yn/yd)`.
    pub fn from_fractions(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        RationalPoint::new(r(xn, xd), r(yn, yd))
    }

    fn random(rng: &mut impl Rng) -> Self {
        let mut coord = || loop {
            let n = rng.gen_range(-MAX_HEIGHT..=MAX_HEIGHT);
            let d = rng.gen_range(1..=MAX_HEIGHT);
            if n != 0 {
                break BigRational::new(BigInt::from(n), BigInt::from(d));
            }
        };
        let x = coord();
        let y = coord();
        RationalPoint { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupOrderResult {
    Finite { order: usize },
    ExceedsBound { bound: usize },
}

fn pow(v: &BigRational, e: i8) -> BigRational {
    match e {
        -1 => v.recip(),
        0 => BigRational::one(),
        _ => v.clone(),
    }
}

/// `Σ_k δ(k) v^k` over `k ∈ {-1,0,1}` for a slice of the indicator.
fn laurent(coeffs: [u8; 3], v: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for (k, &c) in (-1i8..=1).zip(coeffs.iter()) {
        if c == 1 {
            acc += pow(v, k);
        }
    }
    acc
}

fn row(s: &StepSet, j: i8) -> [u8; 3] {
    [s.delta(-1, j), s.delta(0, j), s.delta(1, j)]
}

fn column(s: &StepSet, i: i8) -> [u8; 3] {
    [s.delta(i, -1), s.delta(i, 0), s.delta(i, 1)]
}

/// `Ψ(x, y) = (x, [Σ δ_{i,-1} x^i] / [Σ δ_{i,+1} x^i] · 1/y)`.
pub fn psi(s: &StepSet, p: &RationalPoint) -> Result<RationalPoint> {
    if p.x.is_zero() || p.y.is_zero() {
        return Err(Error::PoleEncountered);
    }
    let num = laurent(row(s, -1), &p.x);
    let den = laurent(row(s, 1), &p.x);
    if num.is_zero() || den.is_zero() {
        return Err(Error::PoleEncountered);
    }
    Ok(RationalPoint {
        x: p.x.clone(),
        y: num / (den * &p.y),
    })
}

/// `Φ(x, y) = ([Σ δ_{-1,j} y^j] / [Σ δ_{+1,j} y^j] · 1/x, y)`.
pub fn phi(s: &StepSet, p: &RationalPoint) -> Result<RationalPoint> {
    if p.x.is_zero() || p.y.is_zero() {
        return Err(Error::PoleEncountered);
    }
    let num = laurent(column(s, -1), &p.y);
    let den = laurent(column(s, 1), &p.y);
    if num.is_zero() || den.is_zero() {
        return Err(Error::PoleEncountered);
    }
    Ok(RationalPoint {
        x: num / (den * &p.x),
        y: p.y.clone(),
    })
}

/// `Σ δ_{i,j} x^i y^j` evaluated exactly.
pub fn step_polynomial(s: &StepSet, p: &RationalPoint) -> Result<BigRational> {
    if p.x.is_zero() || p.y.is_zero() {
        return Err(Error::PoleEncountered);
    }
    Ok(s.steps()
        .into_iter()
        .map(|(i, j)| pow(&p.x, i) * pow(&p.y, j))
        .fold(BigRational::zero(), |a, b| a + b))
}

/// Checks that both generators preserve the step polynomial at `p`.
pub fn invariant_check(s: &StepSet, p: &RationalPoint) -> Result<bool> {
    let base = step_polynomial(s, p)?;
    let via_psi = step_polynomial(s, &psi(s, p)?)?;
    let via_phi = step_polynomial(s, &phi(s, p)?)?;
    Ok(base == via_psi && base == via_phi)
}

/// Applies the alternating word `Ψ Φ Ψ Φ ...` of the given length (rightmost
/// letter first) to `p`.
pub fn apply_alternating_word(s: &StepSet, p: &RationalPoint, length: usize) -> Result<RationalPoint> {
    let mut q = p.clone();
    for k in 0..length {
        q = if k % 2 == 0 { phi(s, &q)? } else { psi(s, &q)? };
    }
    Ok(q)
}

fn check_generators(s: &StepSet) -> Result<()> {
    if s.has_full_support() {
        Ok(())
    } else {
        Err(Error::DegenerateGenerators)
    }
}

/// For a panel point, the list of `m ∈ 1..=max_half_order` such that
/// `(Ψ∘Φ)^m` fixes it. `None` if the orbit touches a pole.
fn fixed_powers(s: &StepSet, p: &RationalPoint, max_half_order: usize) -> Option<Vec<bool>> {
    let mut fixed = Vec::with_capacity(max_half_order);
    let mut q = p.clone();
    for _ in 0..max_half_order {
        q = psi(s, &phi(s, &q).ok()?).ok()?;
        fixed.push(&q == p);
    }
    Some(fixed)
}

/// Draws a panel of pole-free test points; each slot is resampled at most
/// `MAX_RETRIES` times.
pub fn test_panel(s: &StepSet, max_half_order: usize, seed: u64) -> Result<Vec<(RationalPoint, Vec<bool>)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut panel = Vec::with_capacity(PANEL_SIZE);
    for _ in 0..PANEL_SIZE {
        let mut found = None;
        for _ in 0..=MAX_RETRIES {
            let p = RationalPoint::random(&mut rng);
            if let Some(fixed) = fixed_powers(s, &p, max_half_order) {
                found = Some((p, fixed));
                break;
            }
        }
        panel.push(found.ok_or(Error::TestPointExhaustion(MAX_RETRIES))?);
    }
    Ok(panel)
}

/// Smallest `m ≤ max_half_order` with `(Ψ∘Φ)^m = id` on the whole panel; the
/// group order is then `2m`.
pub fn group_order(s: &StepSet, max_half_order: usize, seed: u64) -> Result<GroupOrderResult> {
    check_generators(s)?;
    let panel = test_panel(s, max_half_order, seed)?;
    for m in 1..=max_half_order {
        if panel.iter().all(|(_, fixed)| fixed[m - 1]) {
            debug_assert!(m >= 2, "Ψ∘Φ cannot be the identity");
            return Ok(GroupOrderResult::Finite { order: 2 * m });
        }
    }
    Ok(GroupOrderResult::ExceedsBound {
        bound: 2 * max_half_order,
    })
}
