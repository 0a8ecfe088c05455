//! Separable convex objectives f(x) = Σ f_i(x(i)) + c.
//!
//! Each coordinate carries one univariate convex function: linear,
//! weighted quadratic, or an explicit table of values. All arithmetic is
//! exact, so the solvers' strict comparisons carry no tolerance.

use crate::error::EvalError;
use crate::geometry::{inc, Point, UnitStep};
use crate::value::Value;

/// A univariate convex function on Z (or, for tables, on a finite range).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnivariateConvex {
    /// a·k + b
    Linear { slope: Value, intercept: Value },
    /// w·(k − d)² + b with w ≥ 0
    Quadratic {
        weight: Value,
        center: Value,
        offset: Value,
    },
    /// Explicit values on [lo, lo + values.len()), convex iff
    /// values[k−1] + values[k+1] ≥ 2·values[k] at interior points.
    Table { lo: i64, values: Vec<Value> },
}

impl UnivariateConvex {
    fn eval(&self, coordinate: usize, k: i64) -> Result<Value, EvalError> {
        match self {
            UnivariateConvex::Linear { slope, intercept } => {
                Ok(*slope * Value::from_int(k) + *intercept)
            }
            UnivariateConvex::Quadratic {
                weight,
                center,
                offset,
            } => {
                let d = Value::from_int(k) - *center;
                Ok(*weight * d * d + *offset)
            }
            UnivariateConvex::Table { lo, values } => {
                let hi = lo + values.len() as i64 - 1;
                if k < *lo || k > hi {
                    return Err(EvalError::OutOfDomain {
                        coordinate: coordinate + 1,
                        argument: k,
                        lo: *lo,
                        hi,
                    });
                }
                Ok(values[(k - lo) as usize])
            }
        }
    }

    /// True if the function is defined on the whole closed range.
    pub fn covers(&self, lo: i64, hi: i64) -> bool {
        match self {
            UnivariateConvex::Table { lo: tlo, values } => {
                *tlo <= lo && tlo + values.len() as i64 > hi
            }
            _ => true,
        }
    }
}

/// Where a convexity check failed: 1-based coordinate plus the breakpoint
/// argument at which the discrete convexity inequality is violated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConvexityViolation {
    pub coordinate: usize,
    pub breakpoint: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparableObjective {
    terms: Vec<UnivariateConvex>,
    constant: Value,
}

impl SeparableObjective {
    pub fn new(terms: Vec<UnivariateConvex>, constant: Value) -> Self {
        SeparableObjective { terms, constant }
    }

    /// Linear objective Σ c(i)·x(i); used by the delta-matroid embedding.
    pub fn linear(costs: &[Value]) -> Self {
        SeparableObjective {
            terms: costs
                .iter()
                .map(|c| UnivariateConvex::Linear {
                    slope: *c,
                    intercept: Value::ZERO,
                })
                .collect(),
            constant: Value::ZERO,
        }
    }

    pub fn dim(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[UnivariateConvex] {
        &self.terms
    }

    pub fn constant(&self) -> Value {
        self.constant
    }

    pub fn eval(&self, x: &Point) -> Result<Value, EvalError> {
        if x.dim() != self.terms.len() {
            return Err(EvalError::Dimension(crate::error::DimensionMismatch {
                left: self.terms.len(),
                right: x.dim(),
            }));
        }
        let mut total = self.constant;
        for (i, term) in self.terms.iter().enumerate() {
            total = total + term.eval(i, x[i])?;
        }
        Ok(total)
    }

    /// Structural check for linear/quadratic terms, pointwise check for
    /// tables. Returns the first violation in coordinate order.
    pub fn verify_convexity(&self) -> Result<(), ConvexityViolation> {
        for (i, term) in self.terms.iter().enumerate() {
            match term {
                UnivariateConvex::Linear { .. } => {}
                UnivariateConvex::Quadratic { weight, .. } => {
                    if weight.is_negative() {
                        return Err(ConvexityViolation {
                            coordinate: i + 1,
                            breakpoint: 0,
                        });
                    }
                }
                UnivariateConvex::Table { lo, values } => {
                    for k in 1..values.len().saturating_sub(1) {
                        let two = Value::from_int(2);
                        if values[k - 1] + values[k + 1] < two * values[k] {
                            return Err(ConvexityViolation {
                                coordinate: i + 1,
                                breakpoint: lo + k as i64,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// True if every coordinate's term is defined on [lo(i), hi(i)].
    pub fn covers(&self, lo: &[i64], hi: &[i64]) -> bool {
        self.terms
            .iter()
            .zip(lo.iter().zip(hi))
            .all(|(t, (&l, &h))| t.covers(l, h))
    }
}

/// The exchange inequality f(x) + f(y) ≥ f(x + s) + f(y − s), which holds
/// for every separable convex f and every s ∈ inc(x, y).
pub fn exchange_inequality_holds(
    f: &SeparableObjective,
    x: &Point,
    y: &Point,
    s: UnitStep,
) -> Result<bool, EvalError> {
    debug_assert!(inc(x, y).map_or(true, |d| d.contains(&s)));
    let lhs = f.eval(x)? + f.eval(y)?;
    let rhs = f.eval(&x.step(s))? + f.eval(&y.step(s.negated()))?;
    Ok(lhs >= rhs)
}

/// The separability identity
/// f(x + s + t) − f(x) = {f(x + s) − f(x)} + {f(x + t) − f(x)},
/// exact whenever s and t act on distinct coordinates.
pub fn separability_identity_holds(
    f: &SeparableObjective,
    x: &Point,
    s: UnitStep,
    t: UnitStep,
) -> Result<bool, EvalError> {
    debug_assert!(s.support() != t.support() || s.support().is_none());
    let fx = f.eval(x)?;
    let lhs = f.eval(&x.step(s).step(t))? - fx;
    let rhs = (f.eval(&x.step(s))? - fx) + (f.eval(&x.step(t))? - fx);
    Ok(lhs == rhs)
}
