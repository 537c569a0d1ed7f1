//! Kauffman brackets and reduced Jones polynomials for resolved lattice
//! diagrams.
//!
//! Two independent engines compute the bracket:
//!
//! * [`bracket_statesum`] — the oracle: direct enumeration of all `2^c`
//!   smoothings, optionally through a precomputed loop-count cube shared by
//!   every resolution of one diagram;
//! * [`bracket_sweep`] — the production engine: compiled planar contraction
//!   (see [`sweep`]), also reachable from PD codes via [`bracket_from_pd`].
//!
//! The reduced Jones polynomial is `(-A)^(-3 w) <D>` re-expressed in
//! `q = A^-2`, so the unknot maps to 1 and every knot value lands on even
//! powers of `q`.

pub mod statesum;

pub(crate) mod scan;
pub(crate) mod sweep;

use thiserror::Error;

use crate::lattice::{LatticeDiagram, LatticeError, PlanarDiagram, Resolution};
use crate::laurent::LaurentPoly;

pub use statesum::{
    bracket_statesum, precompute_cube, smoothing_components, Smoothing, SmoothingCube,
    CUBE_LIMIT, STATESUM_LIMIT,
};

use sweep::{SweepSchedule, TangleInput, WindowSweeper};

#[derive(Debug, Error)]
pub enum BracketError {
    #[error("diagram has {got} crossings, over this engine's limit of {limit}")]
    TooManyCrossings { got: usize, limit: usize },
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("malformed diagram")]
    MalformedDiagram,
    #[error("coefficient overflow in a fixed-width engine tier")]
    Overflow,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
}

/// Which bracket engine evaluates a request.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// Direct state-sum enumeration (reference oracle, `2^c` work).
    StateSum,
    /// Compiled planar contraction (production).
    Sweep,
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Engine::StateSum => "statesum",
            Engine::Sweep => "sweep",
        })
    }
}

impl std::str::FromStr for Engine {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "statesum" | "state-sum" => Ok(Engine::StateSum),
            "sweep" => Ok(Engine::Sweep),
            other => Err(format!("unknown engine {other:?} (expected statesum|sweep)")),
        }
    }
}

/// Runs the window executor at the narrowest safe integer tier, escalating
/// on overflow; the mass bound usually proves the first tier safe upfront.
fn run_window_auto(
    sched: &SweepSchedule,
    over: impl Fn(usize) -> bool + Copy,
) -> Result<LaurentPoly, BracketError> {
    if sched.fits_i64() {
        match WindowSweeper::<i64>::new(sched).run(over) {
            Ok(w) => return Ok(w.to_poly()),
            Err(BracketError::Overflow) => {}
            Err(e) => return Err(e),
        }
    }
    if sched.fits_i128() {
        match WindowSweeper::<i128>::new(sched).run(over) {
            Ok(w) => return Ok(w.to_poly()),
            Err(BracketError::Overflow) => {}
            Err(e) => return Err(e),
        }
    }
    let w = WindowSweeper::<num_bigint::BigInt>::new(sched).run(over)?;
    Ok(w.to_poly())
}

/// Kauffman bracket of a resolved lattice diagram via planar contraction,
/// normalized so the 0-crossing unknot has bracket 1.
pub fn bracket_sweep(d: &LatticeDiagram, r: &Resolution) -> Result<LaurentPoly, BracketError> {
    d.checked(r)?;
    let sched = sweep::compile(&TangleInput::from_lattice(d))?;
    run_window_auto(&sched, |t| r.is_over(t))
}

/// Kauffman bracket of a planar-diagram-encoded knot, same normalization
/// as [`bracket_sweep`].
pub fn bracket_from_pd(pd: &PlanarDiagram) -> Result<LaurentPoly, BracketError> {
    let sched = sweep::compile(&TangleInput::from_pd(pd)?)?;
    run_window_auto(&sched, |_| true)
}

/// `(-A)^(-3 w) * bracket`, re-expressed in `q = A^-2`.
pub(crate) fn bracket_to_jones(
    bracket: &LaurentPoly,
    writhe: i64,
) -> Result<LaurentPoly, BracketError> {
    let mut jones_a = bracket.shifted(-3 * writhe);
    if writhe.rem_euclid(2) == 1 {
        jones_a = jones_a.neg();
    }
    if jones_a.is_zero() {
        return Ok(LaurentPoly::zero());
    }
    let max_e = jones_a.max_exp();
    if jones_a.terms().any(|(e, _)| e.rem_euclid(2) != 0) {
        return Err(BracketError::Internal("odd exponent in writhe-normalized bracket"));
    }
    let span_slots = (jones_a.span() / 2) as usize + 1;
    let mut coeffs = vec![num_bigint::BigInt::ZERO; span_slots];
    for (e, c) in jones_a.terms() {
        coeffs[((max_e - e) / 2) as usize] = c.clone();
    }
    Ok(LaurentPoly::new(-max_e / 2, coeffs))
}

/// Reduced Jones polynomial of a resolved lattice diagram.
///
/// The state-sum engine works unaided up to [`STATESUM_LIMIT`] crossings;
/// use [`jones_with_cube`] beyond that.
pub fn jones(d: &LatticeDiagram, r: &Resolution, engine: Engine) -> Result<LaurentPoly, BracketError> {
    let w = d.writhe(r)?;
    let bracket = match engine {
        Engine::Sweep => bracket_sweep(d, r)?,
        Engine::StateSum => bracket_statesum(d, r, None)?,
    };
    bracket_to_jones(&bracket, w)
}

/// Reduced Jones polynomial through the state-sum engine with a shared
/// smoothing cube.
pub fn jones_with_cube(
    d: &LatticeDiagram,
    r: &Resolution,
    cube: &SmoothingCube,
) -> Result<LaurentPoly, BracketError> {
    let w = d.writhe(r)?;
    let bracket = bracket_statesum(d, r, Some(cube))?;
    bracket_to_jones(&bracket, w)
}

/// A diagram's compiled contraction schedule plus its per-crossing `+`
/// signs, the two ingredients batch consumers need.
pub(crate) struct CompiledLattice {
    pub sched: SweepSchedule,
    pub plus_signs: Vec<i8>,
}

pub(crate) fn compile_lattice(d: &LatticeDiagram) -> Result<CompiledLattice, BracketError> {
    Ok(CompiledLattice {
        sched: sweep::compile(&TangleInput::from_lattice(d))?,
        plus_signs: d.plus_signs(),
    })
}

/// Evaluates the Jones polynomial for a stream of resolutions of one
/// diagram, amortizing the schedule compilation. Output order matches input
/// order; per-item failures are carried in the stream.
pub fn batch_jones<I>(
    d: &LatticeDiagram,
    resolutions: I,
) -> impl Iterator<Item = (Resolution, Result<LaurentPoly, BracketError>)>
where
    I: IntoIterator<Item = Resolution>,
{
    const CHUNK: usize = 1024;
    let sched = sweep::compile(&TangleInput::from_lattice(d)).ok();
    let plus_signs = d.plus_signs();
    let crossings = d.crossings();
    let mut source = resolutions.into_iter();
    let mut ready: std::collections::VecDeque<(Resolution, Result<LaurentPoly, BracketError>)> =
        std::collections::VecDeque::new();

    std::iter::from_fn(move || {
        if let Some(item) = ready.pop_front() {
            return Some(item);
        }
        let chunk: Vec<Resolution> = source.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return None;
        }
        let eval = |r: &Resolution| -> Result<LaurentPoly, BracketError> {
            if r.len() != crossings {
                return Err(BracketError::SizeMismatch { expected: crossings, got: r.len() });
            }
            let sched = sched.as_ref().ok_or(BracketError::MalformedDiagram)?;
            let mut w = 0i64;
            for (ci, &s) in plus_signs.iter().enumerate() {
                w += if r.is_over(ci) { s as i64 } else { -(s as i64) };
            }
            let bracket = run_window_auto(sched, |t| r.is_over(t))?;
            bracket_to_jones(&bracket, w)
        };
        #[cfg(feature = "parallel")]
        let results: Vec<_> = {
            use rayon::prelude::*;
            chunk.par_iter().map(eval).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let results: Vec<_> = chunk.iter().map(eval).collect();
        ready.extend(chunk.into_iter().zip(results));
        ready.pop_front()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jones_str(n: usize, text: &str, engine: Engine) -> String {
        let d = LatticeDiagram::build(n);
        let r = Resolution::parse(text, n).unwrap();
        jones(&d, &r, engine).unwrap().to_string()
    }

    #[test]
    fn unknot_one_crossing() {
        for engine in [Engine::StateSum, Engine::Sweep] {
            assert_eq!(jones_str(0, "+", engine), "1");
            assert_eq!(jones_str(0, "-", engine), "1");
        }
    }

    #[test]
    fn jones_normalization_exhaustive_n1() {
        let d = LatticeDiagram::build(1);
        for bits in 0u64..512 {
            let r = Resolution::from_bits(bits, 9);
            let j = jones(&d, &r, Engine::Sweep).unwrap();
            assert_eq!(j.eval_at_one(), num_bigint::BigInt::from(1), "bits {bits:#011b}");
            assert!(j.terms().all(|(e, _)| e % 2 == 0), "odd exponent at {bits:#011b}");
        }
    }

    #[test]
    fn trefoil_appears_at_n1() {
        // The 3x3 lattice carries the trefoil; its Jones value (paper's q
        // convention) must show up among the 512 resolutions, in both
        // chiralities.
        let d = LatticeDiagram::build(1);
        let trefoil = LaurentPoly::parse("q^2+q^6-q^8").unwrap();
        let mirror = trefoil.substitute_inverse();
        let mut seen = (0usize, 0usize);
        for bits in 0u64..512 {
            let r = Resolution::from_bits(bits, 9);
            let j = jones(&d, &r, Engine::Sweep).unwrap();
            if j == trefoil {
                seen.0 += 1;
            } else if j == mirror {
                seen.1 += 1;
            }
        }
        assert_eq!(seen, (40, 40));
    }

    #[test]
    fn mirror_law_exhaustive_n1() {
        let d = LatticeDiagram::build(1);
        for bits in 0u64..512 {
            let r = Resolution::from_bits(bits, 9);
            let j = jones(&d, &r, Engine::Sweep).unwrap();
            let jm = jones(&d, &r.mirror(), Engine::Sweep).unwrap();
            assert_eq!(jm, j.substitute_inverse(), "bits {bits:#011b}");
        }
    }

    #[test]
    fn engines_agree_with_cube_n1() {
        let d = LatticeDiagram::build(1);
        let cube = precompute_cube(&d).unwrap();
        for bits in (0u64..512).step_by(7) {
            let r = Resolution::from_bits(bits, 9);
            assert_eq!(
                jones_with_cube(&d, &r, &cube).unwrap(),
                jones(&d, &r, Engine::Sweep).unwrap()
            );
        }
    }

    #[test]
    fn pd_bracket_matches_sweep() {
        let d = LatticeDiagram::build(1);
        for bits in [3u64, 89, 261, 510] {
            let r = Resolution::from_bits(bits, 9);
            let pd = d.to_pd(&r).unwrap();
            assert_eq!(
                bracket_from_pd(&pd).unwrap(),
                bracket_sweep(&d, &r).unwrap(),
                "bits {bits:#011b}"
            );
        }
    }

    #[test]
    fn batch_matches_single_and_preserves_order() {
        let d = LatticeDiagram::build(1);
        let inputs: Vec<Resolution> = (0u64..64).map(|b| Resolution::from_bits(b * 5 % 512, 9)).collect();
        let out: Vec<_> = batch_jones(&d, inputs.clone()).collect();
        assert_eq!(out.len(), inputs.len());
        for ((r_in, (r_out, res)), _) in inputs.iter().zip(out).zip(0..) {
            assert_eq!(r_in, &r_out);
            assert_eq!(res.unwrap(), jones(&d, r_in, Engine::Sweep).unwrap());
        }
        // errors carried in-stream
        let bad = vec![Resolution::uniform(0, true)];
        let out: Vec<_> = batch_jones(&d, bad).collect();
        assert!(matches!(out[0].1, Err(BracketError::SizeMismatch { .. })));
        // empty stream
        assert_eq!(batch_jones(&d, Vec::new()).count(), 0);
    }

    #[test]
    fn alternating_span_n1() {
        let d = LatticeDiagram::build(1);
        let alt = LatticeDiagram::alternating_resolution(1).unwrap();
        let j = jones(&d, &alt, Engine::Sweep).unwrap();
        // 7 effective crossings -> q-span 14.
        assert_eq!(j.span(), 14);
    }

    #[test]
    fn embedding_preserves_jones_small() {
        let d1 = LatticeDiagram::build(1);
        let d0 = LatticeDiagram::build(0);
        let _ = d0;
        let unknot = Resolution::parse("+", 0).unwrap();
        for (ro, co) in [(0, 0), (0, 2), (2, 0), (2, 2)] {
            let r = d1.embed(&unknot, 0, ro, co).unwrap();
            assert!(jones(&d1, &r, Engine::Sweep).unwrap().is_one(), "offset ({ro},{co})");
        }
    }

    #[test]
    fn jones_value_is_one_only_sometimes() {
        // 312 of the 512 resolutions of the 3x3 lattice are unknots.
        let d = LatticeDiagram::build(1);
        let unknots = (0u64..512)
            .filter(|&bits| {
                jones(&d, &Resolution::from_bits(bits, 9), Engine::Sweep).unwrap().is_one()
            })
            .count();
        assert_eq!(unknots, 312);
    }
}
