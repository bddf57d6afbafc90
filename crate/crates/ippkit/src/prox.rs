//! Closed-form proximal operators and the extended-real value type.

use crate::error::{OptError, Result, check_nonnegative};
use crate::linalg::{Vector, dist_sq};

/// Value of a proper convex function, which may be `+∞` outside its domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtValue {
    /// A finite real value.
    Finite(f64),
    /// The point lies outside the domain.
    Infinite,
}

impl ExtValue {
    /// Returns the finite value, if any.
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtValue::Finite(v) => Some(v),
            ExtValue::Infinite => None,
        }
    }

    /// True when the value is finite.
    pub fn is_finite(self) -> bool {
        matches!(self, ExtValue::Finite(_))
    }

    /// Adds a finite real to the value.
    pub fn plus(self, r: f64) -> ExtValue {
        match self {
            ExtValue::Finite(v) => ExtValue::Finite(v + r),
            ExtValue::Infinite => ExtValue::Infinite,
        }
    }

    /// Strict comparison with `+∞` as the largest element.
    pub fn lt(self, other: ExtValue) -> bool {
        match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => a < b,
            (ExtValue::Finite(_), ExtValue::Infinite) => true,
            _ => false,
        }
    }

    /// Non-strict comparison with `+∞` as the largest element.
    pub fn le(self, other: ExtValue) -> bool {
        !other.lt(self)
    }
}

/// A proper closed convex function with an inexpensive proximal mapping.
pub trait ProxOracle: Send + Sync {
    /// Function value, `+∞` outside the domain.
    fn value(&self, x: &Vector) -> ExtValue;
    /// `argmin_u h(u) + ‖u − x‖² / (2 step)`.
    fn prox(&self, x: &Vector, step: f64) -> Vector;
}

/// The nonsmooth terms used by the experiments and tests.
#[derive(Clone, Debug, PartialEq)]
pub enum ProxKind {
    /// `h ≡ 0`.
    Zero,
    /// `h(x) = γ‖x‖₁`.
    L1 {
        /// Regularization weight.
        gamma: f64,
    },
    /// Indicator of the box `lo ≤ x ≤ hi`.
    Box {
        /// Lower bounds.
        lo: Vector,
        /// Upper bounds.
        hi: Vector,
    },
    /// `h(x) = (γ/2)‖x − center‖²`.
    SqShift {
        /// Curvature of the quadratic.
        gamma: f64,
        /// Center of the quadratic.
        center: Vector,
    },
}

impl ProxKind {
    /// `γ‖·‖₁` with `γ ≥ 0`.
    pub fn l1(gamma: f64) -> Result<Self> {
        check_nonnegative("gamma", gamma)?;
        Ok(ProxKind::L1 { gamma })
    }

    /// Indicator of `[lo, hi]`.
    pub fn boxed(lo: Vector, hi: Vector) -> Result<Self> {
        validate_box(&lo, &hi)?;
        Ok(ProxKind::Box { lo, hi })
    }

    /// Indicator of `[lo, hi]ⁿ`.
    pub fn uniform_box(n: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::boxed(Vector::from_elem(n, lo), Vector::from_elem(n, hi))
    }

    /// `(γ/2)‖· − center‖²` with `γ ≥ 0`.
    pub fn sq_shift(gamma: f64, center: Vector) -> Result<Self> {
        check_nonnegative("gamma", gamma)?;
        Ok(ProxKind::SqShift { gamma, center })
    }
}

impl ProxOracle for ProxKind {
    fn value(&self, x: &Vector) -> ExtValue {
        match self {
            ProxKind::Zero => ExtValue::Finite(0.0),
            ProxKind::L1 { gamma } => ExtValue::Finite(gamma * x.iter().map(|v| v.abs()).sum::<f64>()),
            ProxKind::Box { lo, hi } => {
                let inside = x
                    .iter()
                    .zip(lo.iter().zip(hi.iter()))
                    .all(|(v, (l, h))| *l <= *v && *v <= *h);
                if inside { ExtValue::Finite(0.0) } else { ExtValue::Infinite }
            }
            ProxKind::SqShift { gamma, center } => ExtValue::Finite(0.5 * gamma * dist_sq(x, center)),
        }
    }

    fn prox(&self, x: &Vector, step: f64) -> Vector {
        match self {
            ProxKind::Zero => prox_zero(x, step),
            ProxKind::L1 { gamma } => prox_l1(x, step, *gamma),
            ProxKind::Box { lo, hi } => clamp(x, lo, hi),
            ProxKind::SqShift { gamma, center } => {
                let w = step * gamma;
                (x + &(center * w)) / (1.0 + w)
            }
        }
    }
}

/// Soft threshold `sign(xᵢ)·max(|xᵢ| − tγ, 0)`; ties at `|xᵢ| = tγ` map to 0.
pub fn prox_l1(x: &Vector, t: f64, gamma: f64) -> Vector {
    let k = t * gamma;
    x.mapv(|v| if v > k { v - k } else if v < -k { v + k } else { 0.0 })
}

/// Componentwise projection onto `[lo, hi]`, independent of the step.
pub fn prox_box(x: &Vector, lo: &Vector, hi: &Vector) -> Result<Vector> {
    validate_box(lo, hi)?;
    if x.len() != lo.len() {
        return Err(OptError::Dimension(format!("point has length {}, box has {}", x.len(), lo.len())));
    }
    Ok(clamp(x, lo, hi))
}

/// Identity map, the proximal operator of `h ≡ 0`.
pub fn prox_zero(x: &Vector, _t: f64) -> Vector {
    x.clone()
}

fn clamp(x: &Vector, lo: &Vector, hi: &Vector) -> Vector {
    Vector::from_shape_fn(x.len(), |i| x[i].max(lo[i]).min(hi[i]))
}

fn validate_box(lo: &Vector, hi: &Vector) -> Result<()> {
    if lo.len() != hi.len() {
        return Err(OptError::Dimension(format!("lo has length {}, hi has {}", lo.len(), hi.len())));
    }
    if let Some(i) = (0..lo.len()).find(|&i| !(lo[i] <= hi[i])) {
        return Err(OptError::Parameter(format!("box bounds reversed at index {i}: {} > {}", lo[i], hi[i])));
    }
    Ok(())
}
