//! Truncated formal power series over exact rationals.
//!
//! The generating function of the diagram counts, `H(z) = sum_k h_k z^k`
//! with `h_k = ((q-1)k + 1) d_k / k!`, satisfies the fixed-point equation
//! `H = exp(q z H^(q-1))`. The substitution `psi = z H^(q-1)` turns it into
//! the Cayley-tree equation `psi = z exp(q(q-1) psi)`, and the inverse of
//! `t(w) = w exp(-q(q-1)w)` reduces coefficient extraction to two Taylor
//! coefficients of a plain exponential. This module solves both fixed-point
//! equations by iteration, checks the resulting functional identities, and
//! evaluates the two-term extraction formula literally so that the
//! cancellation it relies on is itself exercised.
//!
//! All arithmetic is exact; denominators grow and that is accepted.

use std::fmt;

use num::traits::Pow;
use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::counting::{factorial, CountError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("exp of a series requires a zero constant term")]
    NonzeroConstantTerm,
}

fn rat(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A power series truncated at a fixed order, with exact rational
/// coefficients. Operations on mismatched orders truncate to the smaller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalPowerSeries {
    coeffs: Vec<BigRational>,
}

impl FormalPowerSeries {
    /// Builds a series from coefficients `c_0..c_N` (at least one required).
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least c_0");
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// The series `z`; needs `order >= 1`.
    pub fn variable(order: usize) -> Self {
        assert!(order >= 1, "z does not fit in an order-0 truncation");
        let mut s = Self::zero(order);
        s.coeffs[1] = BigRational::one();
        s
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Drops coefficients above `order` (which must not exceed the current
    /// order: truncation never invents coefficients).
    pub fn truncated(&self, order: usize) -> Self {
        assert!(order <= self.order());
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    fn common_order(&self, rhs: &Self) -> usize {
        self.order().min(rhs.order())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.common_order(rhs);
        Self {
            coeffs: (0..=n).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.common_order(rhs);
        Self {
            coeffs: (0..=n).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.common_order(rhs);
        let mut coeffs = vec![BigRational::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] += &self.coeffs[i] * &rhs.coeffs[j];
            }
        }
        Self { coeffs }
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `exp(f)` for a series with zero constant term, via the recurrence
    /// `n g_n = sum_{i=1}^{n} i f_i g_{n-i}` that follows from
    /// `(exp f)' = f' exp f`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let n = self.order();
        let mut out = Vec::with_capacity(n + 1);
        out.push(BigRational::one());
        for m in 1..=n {
            let mut acc = BigRational::zero();
            for i in 1..=m {
                if self.coeffs[i].is_zero() {
                    continue;
                }
                acc += rat(i as u64) * &self.coeffs[i] * &out[m - i];
            }
            out.push(acc / rat(m as u64));
        }
        Ok(Self { coeffs: out })
    }

    /// Formal derivative; the order drops by one.
    pub fn derivative(&self) -> Self {
        assert!(self.order() >= 1, "derivative needs order >= 1");
        Self {
            coeffs: (1..=self.order())
                .map(|i| rat(i as u64) * &self.coeffs[i])
                .collect(),
        }
    }

    /// Multiplication by `z` at the same truncation order (the top
    /// coefficient falls off the end).
    pub fn mul_by_z(&self) -> Self {
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len()];
        for i in 0..self.order() {
            coeffs[i + 1] = self.coeffs[i].clone();
        }
        Self { coeffs }
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn first_nonzero_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Coefficients as exact fraction strings, e.g. `["1", "3", "45/2"]`.
    pub fn to_fraction_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    /// JSON array of exact fraction strings; no floats anywhere.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_fraction_strings())
            .expect("string array serialization cannot fail")
    }
}

impl fmt::Display for FormalPowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let abs = c.abs();
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if k == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{k}")?;
                    }
                }
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

/// Solves the Cayley-tree fixed point `f = z exp(a f)` with `f(0) = 0`
/// through `order` by iteration; each pass fixes one further coefficient,
/// so at most `order` passes are needed.
pub fn solve_cayley(a: u64, order: usize) -> FormalPowerSeries {
    assert!(order >= 1);
    let a = rat(a);
    let mut f = FormalPowerSeries::variable(order);
    for _ in 0..order {
        let next = f
            .scale(&a)
            .exp()
            .expect("a*f keeps a zero constant term")
            .mul_by_z();
        if next == f {
            break;
        }
        f = next;
    }
    f
}

/// The diagram generating function `exp(q psi)` with
/// `psi = solve_cayley(q(q-1))`; coefficient `k` is
/// `q^k ((q-1)k + 1)^(k-1) / k!`.
pub fn solve_gf(q: u32, order: usize) -> Result<FormalPowerSeries, CountError> {
    if q < 2 {
        return Err(CountError::InvalidQ { q });
    }
    if order == 0 {
        return Ok(FormalPowerSeries::one(0));
    }
    let psi = solve_cayley(q as u64 * (q as u64 - 1), order);
    Ok(psi
        .scale(&rat(q as u64))
        .exp()
        .expect("q*psi has a zero constant term"))
}

/// Coefficient `k` of the generating function by the contour-free inversion
/// route: with `c = q((q-1)k + 1)`, the coefficient equals
/// `c^k/k! - q(q-1) c^(k-1)/(k-1)!` (the two Taylor coefficients of
/// `exp(cw)` picked out by the change of variables). The two-term form is
/// evaluated literally, not pre-simplified, so the cancellation down to
/// `q c^(k-1)/k!` is itself under test.
pub fn lagrange_gf_coeff(q: u32, k: u32) -> Result<BigRational, CountError> {
    if q < 2 {
        return Err(CountError::InvalidQ { q });
    }
    assert!(k >= 1, "the inversion formula starts at k = 1");
    let q = q as u64;
    let c = BigInt::from(q * ((q - 1) * k as u64 + 1));
    let first = BigRational::new(c.clone().pow(k), factorial(k));
    let second = BigRational::new(
        BigInt::from(q * (q - 1)) * c.pow(k - 1),
        factorial(k - 1),
    );
    Ok(first - second)
}

/// One residual series of [`identity_residuals`].
#[derive(Debug, Clone)]
pub struct IdentityResidual {
    pub name: &'static str,
    pub residual: FormalPowerSeries,
    /// Highest order through which the residual could be formed.
    pub checked_order: usize,
}

impl IdentityResidual {
    pub fn is_zero(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Residuals of the four functional identities tying the generating
/// function and the Cayley series together.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub q: u32,
    pub residuals: Vec<IdentityResidual>,
}

impl IdentityReport {
    pub fn all_zero(&self) -> bool {
        self.residuals.iter().all(IdentityResidual::is_zero)
    }

    /// Highest order verified by every identity (differentiation costs the
    /// top coefficient, hence one less than the input order).
    pub fn verified_order(&self) -> usize {
        self.residuals
            .iter()
            .map(|r| r.checked_order)
            .min()
            .expect("report always carries four residuals")
    }
}

/// Computes the four residuals from explicitly supplied series. Ordinarily
/// called through [`verify_identities`]; taking the series as inputs lets
/// tests feed perturbed coefficients and watch a residual light up.
pub fn identity_residuals(
    gf: &FormalPowerSeries,
    cayley: &FormalPowerSeries,
    q: u32,
) -> IdentityReport {
    let n = gf.order().min(cayley.order());
    let gf = gf.truncated(n);
    let cayley = cayley.truncated(n);
    let a = rat(q as u64 * (q as u64 - 1));
    let q_rat = rat(q as u64);
    let gf_pow = gf.pow(q - 1);

    // H = exp(q z H^(q-1))
    let fixed_point = gf.sub(
        &gf_pow
            .scale(&q_rat)
            .mul_by_z()
            .exp()
            .expect("z-multiple has zero constant term"),
    );
    // psi = z H^(q-1)
    let substitution = cayley.sub(&gf_pow.mul_by_z());
    // psi = z exp(q(q-1) psi)
    let cayley_fixed_point = cayley.sub(
        &cayley
            .scale(&a)
            .exp()
            .expect("a*psi has zero constant term")
            .mul_by_z(),
    );
    // H' (1 - q(q-1) z H^(q-1)) = q H^q
    let ode = gf
        .derivative()
        .mul(&FormalPowerSeries::one(n).sub(&gf_pow.scale(&a).mul_by_z()))
        .sub(&gf.pow(q).scale(&q_rat));

    IdentityReport {
        q,
        residuals: vec![
            IdentityResidual {
                name: "gf_fixed_point",
                residual: fixed_point,
                checked_order: n,
            },
            IdentityResidual {
                name: "cayley_substitution",
                residual: substitution,
                checked_order: n,
            },
            IdentityResidual {
                name: "cayley_fixed_point",
                residual: cayley_fixed_point,
                checked_order: n,
            },
            IdentityResidual {
                name: "gf_ode",
                residual: ode,
                checked_order: n - 1,
            },
        ],
    }
}

/// Solves both fixed points at `order` and reports the four residuals; all
/// must be identically zero.
pub fn verify_identities(q: u32, order: usize) -> Result<IdentityReport, CountError> {
    assert!(order >= 2, "identity checks need order >= 2");
    let gf = solve_gf(q, order)?;
    let cayley = solve_cayley(q as u64 * (q as u64 - 1), order);
    Ok(identity_residuals(&gf, &cayley, q))
}
