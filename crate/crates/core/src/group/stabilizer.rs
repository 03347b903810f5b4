//! Stabilizers `G_m = {(f, θ) : f·ρ(θ)·m = m}`.
//!
//! Since `f` commutes with the torus, `(f, θ)` fixes `m` iff `ρ(θ)·m = f⁻¹·m`.
//! Per block this is "no solution", "any angle" (block of `m` is zero) or a
//! single residue `φ_b ≡ α_b`. The torus equations `Σᵢ wᵢ_b θᵢ ≡ α_b` are
//! solvable iff every integer relation `c` among the supporting weight
//! columns satisfies `∏ e^{i c_b α_b} = 1`. Phases `e^{iα_b}` are computed as
//! the complex quotient of the block coordinates, so the test is exact on
//! rational input.

use super::action::Representation;
use super::finite::FiniteGroup;
use super::subgroup::ClosedSubgroup;
use super::torus::TorusSubgroup;
use crate::error::{Error, Result};
use crate::intlat::integer_kernel;
use crate::scalar::{format_point, Scalar, ZeroTest};

type Complex<S> = (S, S);

fn cmul<S: Scalar>(a: &Complex<S>, b: &Complex<S>) -> Complex<S> {
    (
        a.0.clone() * b.0.clone() - a.1.clone() * b.1.clone(),
        a.0.clone() * b.1.clone() + a.1.clone() * b.0.clone(),
    )
}

/// Unit-modulus power; negative exponents conjugate.
fn cpow<S: Scalar>(z: &Complex<S>, e: i64) -> Complex<S> {
    let base = if e < 0 {
        (z.0.clone(), -z.1.clone())
    } else {
        z.clone()
    };
    (0..e.abs()).fold((S::one(), S::zero()), |acc, _| cmul(&acc, &base))
}

struct Decider<'a, S> {
    point: &'a [S],
    scale: f64,
    tol: f64,
}

impl<S: Scalar> Decider<'_, S> {
    fn zero(&self, x: &S, scale: f64, what: &str) -> Result<bool> {
        match x.zero_test(scale, self.tol) {
            ZeroTest::Zero => Ok(true),
            ZeroTest::NonZero => Ok(false),
            ZeroTest::Ambiguous => Err(Error::NumericalAmbiguity {
                point: format_point(self.point),
                detail: format!("{what} = {x}"),
            }),
        }
    }
}

/// Torus part of the stabilizer: constraints from the weights of the
/// blocks on which `support` is true.
pub fn torus_stabilizer(rep: &Representation, support: &[bool]) -> TorusSubgroup {
    let rows: Vec<Vec<i64>> = support
        .iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(b, _)| rep.block_weight(b))
        .collect();
    TorusSubgroup::from_constraints(&rows, rep.torus_rank())
}

/// Block support pattern of `m` (true where the block is nonzero).
pub fn block_support<S: Scalar>(rep: &Representation, m: &[S], tol: f64) -> Result<Vec<bool>> {
    let scale = m.iter().map(|x| x.to_f64().abs()).fold(1.0, f64::max);
    let d = Decider {
        point: m,
        scale,
        tol,
    };
    rep.blocks()
        .iter()
        .map(|&(p, q)| {
            let zp = d.zero(&m[p], d.scale, "block coordinate")?;
            let zq = d.zero(&m[q], d.scale, "block coordinate")?;
            Ok(!(zp && zq))
        })
        .collect()
}

pub fn stabilizer<S: Scalar>(
    group: &FiniteGroup,
    rep: &Representation,
    m: &[S],
    tol: f64,
) -> Result<ClosedSubgroup> {
    if m.len() != rep.dim() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim(),
            got: m.len(),
        });
    }
    let scale = m.iter().map(|x| x.to_f64().abs()).fold(1.0, f64::max);
    let d = Decider {
        point: m,
        scale,
        tol,
    };
    let support = block_support(rep, m, tol)?;
    let torus = torus_stabilizer(rep, &support);

    let supp_blocks: Vec<usize> = (0..support.len()).filter(|&b| support[b]).collect();
    let weight_cols: Vec<Vec<i64>> = rep
        .weights()
        .iter()
        .map(|row| supp_blocks.iter().map(|&b| row[b]).collect())
        .collect();
    let relations = integer_kernel(&weight_cols, supp_blocks.len());
    let free = rep.free_coordinates();

    let mut finite = Vec::new();
    for f in 0..group.order() {
        let u = rep.finite_act(group.inverse(f), m);
        // coordinates outside the blocks must already agree
        let mut solvable = true;
        let mut fixes = true;
        for &c in &free {
            if !d.zero(
                &(u[c].clone() - m[c].clone()),
                scale,
                "free coordinate difference",
            )? {
                solvable = false;
                break;
            }
        }
        let mut phases: Vec<Complex<S>> = Vec::with_capacity(supp_blocks.len());
        if solvable {
            for (b, &(p, q)) in rep.blocks().iter().enumerate() {
                let (a, bb) = (m[p].clone(), m[q].clone());
                let (c, dd) = (u[p].clone(), u[q].clone());
                if !support[b] {
                    let zc = d.zero(&c, scale, "image block coordinate")?;
                    let zd = d.zero(&dd, scale, "image block coordinate")?;
                    if !(zc && zd) {
                        solvable = false;
                        break;
                    }
                    continue;
                }
                let nm = a.clone() * a.clone() + bb.clone() * bb.clone();
                let nu = c.clone() * c.clone() + dd.clone() * dd.clone();
                if !d.zero(&(nu - nm.clone()), scale * scale, "block norm difference")? {
                    solvable = false;
                    break;
                }
                // e^{iα} = (c + i d) / (a + i b)
                let re = (c.clone() * a.clone() + dd.clone() * bb.clone()) / nm.clone();
                let im = (dd * a - c * bb) / nm;
                if !(d.zero(&(re.clone() - S::one()), 1.0, "block phase")?
                    && d.zero(&im, 1.0, "block phase")?)
                {
                    fixes = false;
                }
                phases.push((re, im));
            }
        }
        if !solvable {
            continue;
        }
        for rel in &relations {
            let prod = rel
                .iter()
                .zip(&phases)
                .fold((S::one(), S::zero()), |acc, (&e, z)| {
                    cmul(&acc, &cpow(z, e))
                });
            if !(d.zero(&(prod.0 - S::one()), 1.0, "phase relation")?
                && d.zero(&prod.1, 1.0, "phase relation")?)
            {
                solvable = false;
                break;
            }
        }
        if !solvable {
            continue;
        }
        if fixes {
            finite.push(f);
        } else {
            return Err(Error::NonProductStabilizer {
                point: format_point(m),
                element: f,
            });
        }
    }
    Ok(ClosedSubgroup::new(finite, torus))
}
