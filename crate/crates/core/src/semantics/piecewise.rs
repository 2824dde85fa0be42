//! Exact piecewise-linear functions of one unknown `v` in `[0, 1]`.
//!
//! Internally a function lives on atomic cells: the breakpoints
//! `p_0 = 0 < p_1 < ... < p_n = 1` as point cells and the open intervals
//! between them. Each cell carries an affine map `a*v + b` whose values on
//! the cell already lie in `[0, 1]`, so no clamping is ever deferred.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::eval::{Evaluator, ValueDomain};
use super::value::Rational;
use super::{EvalError, UnitValue, Valuation};
use crate::syntax::Formula;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Affine {
    a: Rational,
    b: Rational,
}

impl Affine {
    fn constant(b: Rational) -> Self {
        Affine { a: Rational::zero(), b }
    }

    fn identity() -> Self {
        Affine {
            a: Rational::one(),
            b: Rational::zero(),
        }
    }

    fn at(&self, v: &Rational) -> Rational {
        &self.a * v + &self.b
    }

    fn add(&self, o: &Affine) -> Affine {
        Affine {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }

    fn sub(&self, o: &Affine) -> Affine {
        Affine {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }

    fn one_minus(&self) -> Affine {
        Affine {
            a: -&self.a,
            b: Rational::one() - &self.b,
        }
    }

    fn root(&self) -> Option<Rational> {
        (!self.a.is_zero()).then(|| -&self.b / &self.a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinear {
    breaks: Vec<Rational>,
    /// `2 * breaks.len() - 1` cells: even slots are points, odd slots open intervals.
    cells: Vec<Affine>,
}

/// One maximal piece of the canonical presentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Piece {
    #[serde(serialize_with = "ser_q")]
    pub lo: Rational,
    #[serde(serialize_with = "ser_q")]
    pub hi: Rational,
    pub closed_lo: bool,
    pub closed_hi: bool,
    #[serde(serialize_with = "ser_q")]
    pub a: Rational,
    #[serde(serialize_with = "ser_q")]
    pub b: Rational,
}

fn ser_q<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(q)
}

impl Piece {
    pub fn contains(&self, v: &Rational) -> bool {
        let above = if self.closed_lo { v >= &self.lo } else { v > &self.lo };
        let below = if self.closed_hi { v <= &self.hi } else { v < &self.hi };
        above && below
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

impl PiecewiseLinear {
    fn uniform(f: Affine) -> Self {
        let mut p = PiecewiseLinear {
            breaks: vec![Rational::zero(), Rational::one()],
            cells: vec![f.clone(), f.clone(), f],
        };
        p.canonicalize();
        p
    }

    pub fn constant(q: &Rational) -> Self {
        Self::uniform(Affine::constant(q.clone()))
    }

    pub fn identity() -> Self {
        Self::uniform(Affine::identity())
    }

    /// Exact value at `v`.
    pub fn eval(&self, v: &Rational) -> Rational {
        for (i, p) in self.breaks.iter().enumerate() {
            if v == p {
                return self.cells[2 * i].at(v);
            }
            if v < p {
                return self.cells[2 * i - 1].at(v);
            }
        }
        panic!("{v} is outside [0,1]")
    }

    fn cell_sample(&self, i: usize) -> Rational {
        if i.is_multiple_of(2) {
            self.breaks[i / 2].clone()
        } else {
            (&self.breaks[i / 2] + &self.breaks[i / 2 + 1]) / Rational::from_integer(2.into())
        }
    }

    /// Affine data of `self` on each cell of the finer grid `breaks`.
    fn on_grid(&self, breaks: &[Rational]) -> Vec<Affine> {
        let mut out = Vec::with_capacity(2 * breaks.len() - 1);
        let mut j = 0;
        for (i, p) in breaks.iter().enumerate() {
            while self.breaks[j] < *p {
                j += 1;
            }
            out.push(if self.breaks[j] == *p { self.cells[2 * j].clone() } else { self.cells[2 * j - 1].clone() });
            if i + 1 < breaks.len() {
                let k = self.breaks.iter().rposition(|q| q <= p).expect("grid starts at 0");
                out.push(self.cells[2 * k + 1].clone());
            }
        }
        out
    }

    /// Pointwise combination. `switches` lists affine maps whose sign may
    /// change the branch taken by `out`; the grid is refined at their roots
    /// so that `out` may decide its branch from one sample per cell.
    fn lift(
        inputs: &[&PiecewiseLinear],
        switches: impl Fn(&[Affine]) -> Vec<Affine>,
        out: impl Fn(&[Affine], &Rational) -> Affine,
    ) -> PiecewiseLinear {
        let mut breaks: Vec<Rational> = inputs.iter().flat_map(|f| f.breaks.iter().cloned()).collect();
        breaks.sort();
        breaks.dedup();
        let gather = |breaks: &[Rational]| -> Vec<Vec<Affine>> {
            let per_input: Vec<Vec<Affine>> = inputs.iter().map(|f| f.on_grid(breaks)).collect();
            (0..2 * breaks.len() - 1)
                .map(|c| per_input.iter().map(|g| g[c].clone()).collect())
                .collect()
        };
        let mut extra = Vec::new();
        for (c, args) in gather(&breaks).iter().enumerate() {
            if c % 2 == 1 {
                let (lo, hi) = (&breaks[c / 2], &breaks[c / 2 + 1]);
                for s in switches(args) {
                    if let Some(r) = s.root() {
                        if &r > lo && &r < hi {
                            extra.push(r);
                        }
                    }
                }
            }
        }
        breaks.extend(extra);
        breaks.sort();
        breaks.dedup();
        let args = gather(&breaks);
        let mut result = PiecewiseLinear {
            cells: Vec::with_capacity(args.len()),
            breaks,
        };
        for (c, a) in args.iter().enumerate() {
            let s = result.cell_sample(c);
            result.cells.push(out(a, &s));
        }
        result.canonicalize();
        result
    }

    /// Points become constants; breakpoints interior to one affine run are dropped.
    fn canonicalize(&mut self) {
        for (i, p) in self.breaks.iter().enumerate() {
            let c = &mut self.cells[2 * i];
            *c = Affine::constant(c.at(p));
        }
        let mut i = 1;
        while i + 1 < self.breaks.len() {
            let (left, point, right) = (&self.cells[2 * i - 1], &self.cells[2 * i], &self.cells[2 * i + 1]);
            if left == right && left.at(&self.breaks[i]) == point.b {
                self.breaks.remove(i);
                self.cells.drain(2 * i..2 * i + 2);
            } else {
                i += 1;
            }
        }
    }

    /// Maximal pieces, left to right. An isolated point is reported as the
    /// constant `0*v + value`.
    pub fn pieces(&self) -> Vec<Piece> {
        let mut out: Vec<(Piece, bool)> = Vec::new();
        for (c, f) in self.cells.iter().enumerate() {
            let (lo, hi) = if c % 2 == 0 {
                (self.breaks[c / 2].clone(), self.breaks[c / 2].clone())
            } else {
                (self.breaks[c / 2].clone(), self.breaks[c / 2 + 1].clone())
            };
            let point = c % 2 == 0;
            if let Some((last, has_interval)) = out.last_mut() {
                let joins = if point {
                    *has_interval && last.a.clone() * &lo + &last.b == f.b
                } else if *has_interval {
                    last.a == f.a && last.b == f.b
                } else {
                    f.at(&lo) == last.b
                };
                if joins {
                    last.hi = hi;
                    last.closed_hi = point;
                    if !point && !*has_interval {
                        last.a = f.a.clone();
                        last.b = f.b.clone();
                        *has_interval = true;
                    }
                    continue;
                }
            }
            out.push((
                Piece {
                    lo,
                    hi,
                    closed_lo: point,
                    closed_hi: point,
                    a: f.a.clone(),
                    b: f.b.clone(),
                },
                !point,
            ));
        }
        out.into_iter().map(|(p, _)| p).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "pieces": self.pieces() })
    }
}

impl ValueDomain for PiecewiseLinear {
    fn constant(v: &UnitValue) -> Self {
        PiecewiseLinear::constant(v.rational())
    }

    fn unknown() -> Option<Self> {
        Some(PiecewiseLinear::identity())
    }

    fn neg(&self) -> Self {
        Self::lift(&[self], |_| vec![], |f, _| f[0].one_minus())
    }

    fn cond(&self, b: &Self) -> Self {
        // min{1, 1 - f + g} switches where g - f crosses 0.
        Self::lift(
            &[self, b],
            |f| vec![f[1].sub(&f[0])],
            |f, s| {
                let h = f[0].one_minus().add(&f[1]);
                if h.at(s) >= Rational::one() {
                    Affine::constant(Rational::one())
                } else {
                    h
                }
            },
        )
    }

    fn exists_sup(explicit: &[Self], tail: &Self) -> Self {
        let inputs: Vec<&PiecewiseLinear> = explicit.iter().chain(std::iter::once(tail)).collect();
        Self::lift(
            &inputs,
            |f| {
                let mut d = Vec::new();
                for i in 0..f.len() {
                    for j in i + 1..f.len() {
                        d.push(f[i].sub(&f[j]));
                    }
                }
                d
            },
            |f, s| {
                f.iter()
                    .max_by(|x, y| x.at(s).cmp(&y.at(s)))
                    .cloned()
                    .expect("at least the tail")
            },
        )
    }

    fn exists_sum(explicit: &[Self], tail: &Self) -> Self {
        // A positive tail diverges; otherwise clamp the finite explicit sum.
        let inputs: Vec<&PiecewiseLinear> = std::iter::once(tail).chain(explicit.iter()).collect();
        let sum = |f: &[Affine]| f[1..].iter().fold(Affine::constant(Rational::zero()), |acc, g| acc.add(g));
        Self::lift(
            &inputs,
            |f| vec![f[0].clone(), sum(f).sub(&Affine::constant(Rational::one()))],
            |f, s| {
                let total = sum(f);
                if f[0].at(s).is_positive() || total.at(s) >= Rational::one() {
                    Affine::constant(Rational::one())
                } else {
                    total
                }
            },
        )
    }
}

/// Value of `a` as a function of the valuation's unknown atom.
pub fn eval_parametric(v: &Valuation, a: &Formula) -> Result<PiecewiseLinear, EvalError> {
    if v.unknown().is_none() {
        return Err(EvalError::NoUnknown);
    }
    Evaluator::new(v).sentence(a)
}

/// A connected component of a solution set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Interval {
    #[serde(serialize_with = "ser_q")]
    pub lo: Rational,
    #[serde(serialize_with = "ser_q")]
    pub hi: Rational,
    pub closed_lo: bool,
    pub closed_hi: bool,
}

impl Interval {
    pub fn point(p: Rational) -> Self {
        Interval {
            lo: p.clone(),
            hi: p,
            closed_lo: true,
            closed_hi: true,
        }
    }
}

/// `{v in [0,1] : f(v) = v}` as disjoint components in increasing order.
pub fn fixed_points(f: &PiecewiseLinear) -> Vec<Interval> {
    let mut out: Vec<Interval> = Vec::new();
    for p in f.pieces() {
        let comp = if p.a.is_one() {
            p.b.is_zero().then(|| Interval {
                lo: p.lo.clone(),
                hi: p.hi.clone(),
                closed_lo: p.closed_lo,
                closed_hi: p.closed_hi,
            })
        } else {
            let v = &p.b / (Rational::one() - &p.a);
            p.contains(&v).then(|| Interval::point(v))
        };
        let Some(comp) = comp else { continue };
        if let Some(last) = out.last_mut() {
            if last.hi == comp.lo && (last.closed_hi || comp.closed_lo) {
                last.hi = comp.hi;
                last.closed_hi = comp.closed_hi;
                continue;
            }
        }
        out.push(comp);
    }
    out
}
