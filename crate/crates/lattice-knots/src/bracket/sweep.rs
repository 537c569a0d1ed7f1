//! Production bracket engine: planar contraction along a fixed crossing
//! order.
//!
//! The diagram is processed one crossing at a time. The frontier of the
//! processed region is a set of open strand ends; a sweep state maps each
//! reachable pairing of those ends (a noncrossing boundary matching) to a
//! Laurent-polynomial weight. Because which two matchings a crossing can
//! produce does not depend on the over/under assignment — only the A/A^-1
//! weight assignment does — the whole transition structure is compiled once
//! per diagram and reused for every resolution: per-resolution evaluation is
//! then pure table-driven array arithmetic.
//!
//! Strand ends are tracked as "ports": each arc of the 4-valent graph has
//! two ports, numbered `2 * arc` and `2 * arc + 1`, so an arc's other end is
//! `port ^ 1`.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::lattice::{LatticeDiagram, PlanarDiagram};

use super::BracketError;

/// A crossing seen by the contraction engine: for each of the two local
/// smoothings, the two port pairs it joins. Index 0 is the smoothing that
/// acts as the Kauffman A-smoothing when the crossing is resolved `+`.
#[derive(Clone, Debug)]
pub(crate) struct TangleCrossing {
    pub pairings: [[(u16, u16); 2]; 2],
}

/// A knot diagram reduced to what the engine needs.
pub(crate) struct TangleInput {
    pub port_count: usize,
    pub crossings: Vec<TangleCrossing>,
}

impl TangleInput {
    /// Lattice crossings in row-major order. Smoothing 0 joins west-north /
    /// south-east, smoothing 1 joins north-east / west-south, matching the
    /// geometric labels of the state-sum engine.
    pub fn from_lattice(d: &LatticeDiagram) -> Self {
        let port = |stub: usize| -> u16 {
            let (arc, end) = d.stub_arc(stub);
            (arc * 2 + end as usize) as u16
        };
        let crossings = (0..d.crossings())
            .map(|ci| {
                let (w, n, e, s) = (
                    port(ci * 4),
                    port(ci * 4 + 1),
                    port(ci * 4 + 2),
                    port(ci * 4 + 3),
                );
                TangleCrossing { pairings: [[(w, n), (s, e)], [(n, e), (w, s)]] }
            })
            .collect();
        TangleInput { port_count: 2 * d.arc_count(), crossings }
    }

    /// PD crossings in listing order. Slot 0 is the incoming under-strand
    /// arc and slots run counterclockwise, so the A-smoothing joins slots
    /// 0-1 and 2-3.
    pub fn from_pd(pd: &PlanarDiagram) -> Result<Self, BracketError> {
        if !pd.is_well_formed() {
            return Err(BracketError::MalformedDiagram);
        }
        let mut seen = vec![false; pd.arc_count + 1];
        let mut crossings = Vec::with_capacity(pd.crossings.len());
        for x in &pd.crossings {
            let mut p = [0u16; 4];
            for (slot, &label) in x.iter().enumerate() {
                let end = if seen[label as usize] { 1 } else { 0 };
                seen[label as usize] = true;
                p[slot] = ((label - 1) * 2) as u16 + end;
            }
            crossings.push(TangleCrossing {
                pairings: [[(p[0], p[1]), (p[2], p[3])], [(p[1], p[2]), (p[3], p[0])]],
            });
        }
        Ok(TangleInput { port_count: 2 * pd.arc_count, crossings })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Trans {
    pub dst: u32,
    pub loops: u8,
}

/// Compiled contraction schedule for one diagram: per level (= crossing),
/// the reachable boundary matchings and where each smoothing sends them.
pub(crate) struct SweepSchedule {
    pub crossing_count: usize,
    /// `levels[t][src][sigma]` — transition out of state `src` at level `t`.
    pub levels: Vec<Vec<[Trans; 2]>>,
    /// Reachable states per level, `crossing_count + 1` entries.
    pub state_counts: Vec<u32>,
    /// Exponent window per level (step 2, lowest exponent; parity = level).
    pub window_lo: Vec<i32>,
    pub window_slots: Vec<u32>,
    /// Upper bound on the total coefficient mass of any intermediate or
    /// final window: sum over smoothings of `2^loops`.
    pub mass_bound: BigInt,
    /// Largest open-port frontier seen, for diagnostics and tests.
    pub max_open_ports: usize,
}

impl SweepSchedule {
    pub fn fits_i64(&self) -> bool {
        self.mass_bound <= BigInt::from(i64::MAX / 4)
    }

    pub fn fits_i128(&self) -> bool {
        self.mass_bound <= BigInt::from(i128::MAX / 4)
    }

    pub fn max_states(&self) -> usize {
        self.state_counts.iter().copied().max().unwrap_or(1) as usize
    }

    pub fn max_slots(&self) -> usize {
        self.window_slots.iter().copied().max().unwrap_or(1) as usize
    }

    /// Loop count of one full smoothing, read off the compiled transitions.
    /// Used to cross-check the schedule against the state-sum loop oracle.
    #[cfg(test)]
    pub fn trace_loops(&self, choice: impl Fn(usize) -> bool) -> u32 {
        let mut state = 0u32;
        let mut loops = 0u32;
        for t in 0..self.crossing_count {
            let tr = self.levels[t][state as usize][usize::from(choice(t))];
            loops += tr.loops as u32;
            state = tr.dst;
        }
        assert_eq!(state, 0);
        loops
    }
}

/// One contraction step: joins the two port pairs of a smoothing into the
/// matching, returning the successor matching and how many loops closed.
///
/// Matching keys are flat sorted `(low, high)` port pairs.
fn transform(key: &[u16], pairing: &[(u16, u16); 2]) -> (Vec<u16>, u8) {
    let mut map: HashMap<u16, u16> = HashMap::with_capacity(key.len() + 2);
    for pair in key.chunks_exact(2) {
        map.insert(pair[0], pair[1]);
        map.insert(pair[1], pair[0]);
    }
    let mut loops = 0u8;
    for &(s, t) in pairing {
        if map.get(&s) == Some(&t) {
            map.remove(&s);
            map.remove(&t);
            loops += 1;
            continue;
        }
        if s ^ 1 == t {
            debug_assert!(!map.contains_key(&s) && !map.contains_key(&t));
            loops += 1;
            continue;
        }
        let a = match map.remove(&s) {
            Some(x) => {
                map.remove(&x);
                x
            }
            None => s ^ 1,
        };
        let b = match map.remove(&t) {
            Some(x) => {
                map.remove(&x);
                x
            }
            None => t ^ 1,
        };
        debug_assert!(a != b && a != t && b != s);
        map.insert(a, b);
        map.insert(b, a);
    }
    let mut out: Vec<u16> = Vec::with_capacity(map.len());
    for (&p, &q) in &map {
        if p < q {
            out.push(p);
        }
    }
    out.sort_unstable();
    let mut flat = Vec::with_capacity(map.len());
    for p in out {
        flat.push(p);
        flat.push(map[&p]);
    }
    (flat, loops)
}

pub(crate) fn compile(input: &TangleInput) -> Result<SweepSchedule, BracketError> {
    let c = input.crossings.len();
    let mut keys: Vec<Vec<u16>> = vec![Vec::new()];
    let mut masses: Vec<BigInt> = vec![<BigInt as num_traits::One>::one()];
    let mut levels = Vec::with_capacity(c);
    let mut state_counts = vec![1u32];
    let mut window_lo = vec![0i32];
    let mut window_slots = vec![1u32];
    let (mut lo, mut hi) = (0i32, 0i32);
    let mut max_open = 0usize;

    for t in 0..c {
        let mut next_index: HashMap<Vec<u16>, u32> = HashMap::new();
        let mut next_keys: Vec<Vec<u16>> = Vec::new();
        let mut next_masses: Vec<BigInt> = Vec::new();
        let mut trans = Vec::with_capacity(keys.len());
        let mut max_loops = 0u8;
        for (src, key) in keys.iter().enumerate() {
            let mut tr = [Trans::default(); 2];
            for sigma in 0..2 {
                let (nkey, loops) = transform(key, &input.crossings[t].pairings[sigma]);
                max_loops = max_loops.max(loops);
                let dst = *next_index.entry(nkey.clone()).or_insert_with(|| {
                    next_keys.push(nkey);
                    next_masses.push(BigInt::ZERO);
                    (next_keys.len() - 1) as u32
                });
                next_masses[dst as usize] += &masses[src] << loops;
                tr[sigma] = Trans { dst, loops };
            }
            trans.push(tr);
        }
        levels.push(trans);
        keys = next_keys;
        masses = next_masses;
        state_counts.push(keys.len() as u32);
        max_open = max_open.max(keys.iter().map(|k| k.len()).max().unwrap_or(0));
        lo -= 1 + 2 * max_loops as i32;
        hi += 1 + 2 * max_loops as i32;
        window_lo.push(lo);
        window_slots.push(((hi - lo) / 2 + 1) as u32);
    }

    if keys.len() != 1 || !keys[0].is_empty() {
        return Err(BracketError::MalformedDiagram);
    }
    Ok(SweepSchedule {
        crossing_count: c,
        levels,
        state_counts,
        window_lo,
        window_slots,
        mass_bound: masses.pop().unwrap(),
        max_open_ports: max_open,
    })
}

/// Coefficient scalar for the window executor. Additions are checked so a
/// tier that turns out too narrow escalates instead of wrapping.
pub(crate) trait EngineScalar: Clone + Default + PartialEq + Send + Sync + 'static {
    fn is_zero(&self) -> bool;
    #[must_use]
    fn add_assign_checked(&mut self, rhs: &Self) -> bool;
    #[must_use]
    fn sub_assign_checked(&mut self, rhs: &Self) -> bool;
    fn neg_of(v: &Self) -> Self;
    fn to_bigint(&self) -> BigInt;
    fn one() -> Self;
}

macro_rules! impl_scalar_prim {
    ($t:ty) => {
        impl EngineScalar for $t {
            fn is_zero(&self) -> bool {
                *self == 0
            }
            fn add_assign_checked(&mut self, rhs: &Self) -> bool {
                match self.checked_add(*rhs) {
                    Some(v) => {
                        *self = v;
                        true
                    }
                    None => false,
                }
            }
            fn sub_assign_checked(&mut self, rhs: &Self) -> bool {
                match self.checked_sub(*rhs) {
                    Some(v) => {
                        *self = v;
                        true
                    }
                    None => false,
                }
            }
            fn neg_of(v: &Self) -> Self {
                -*v
            }
            fn to_bigint(&self) -> BigInt {
                BigInt::from(*self)
            }
            fn one() -> Self {
                1
            }
        }
    };
}

impl_scalar_prim!(i64);
impl_scalar_prim!(i128);

impl EngineScalar for BigInt {
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add_assign_checked(&mut self, rhs: &Self) -> bool {
        *self += rhs;
        true
    }
    fn sub_assign_checked(&mut self, rhs: &Self) -> bool {
        *self -= rhs;
        true
    }
    fn neg_of(v: &Self) -> Self {
        -v
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn one() -> Self {
        <BigInt as num_traits::One>::one()
    }
}

/// Reusable window buffers for running one resolution through a schedule.
pub(crate) struct WindowSweeper<'a, S: EngineScalar> {
    sched: &'a SweepSchedule,
    cur: Vec<S>,
    nxt: Vec<S>,
}

/// A bracket polynomial as a raw window: `coeffs[i]` is the coefficient of
/// `A^(lo + 2 i)`.
pub(crate) struct BracketWindow<S> {
    pub lo: i32,
    pub coeffs: Vec<S>,
}

impl<'a, S: EngineScalar> WindowSweeper<'a, S> {
    pub fn new(sched: &'a SweepSchedule) -> Self {
        let cap = sched
            .state_counts
            .iter()
            .zip(&sched.window_slots)
            .map(|(s, w)| *s as usize * *w as usize)
            .max()
            .unwrap_or(1);
        WindowSweeper { sched, cur: Vec::with_capacity(cap), nxt: Vec::with_capacity(cap) }
    }

    /// Runs one resolution (`over(t)` = `+` at crossing `t`) and returns the
    /// normalized Kauffman bracket window (unknot = 1).
    pub fn run(&mut self, over: impl Fn(usize) -> bool) -> Result<BracketWindow<S>, BracketError> {
        let sched = self.sched;
        self.cur.clear();
        self.cur.push(S::one());
        for t in 0..sched.crossing_count {
            let bit = over(t);
            let slots_in = sched.window_slots[t] as usize;
            let slots_out = sched.window_slots[t + 1] as usize;
            let lo_in = sched.window_lo[t];
            let lo_out = sched.window_lo[t + 1];
            self.nxt.clear();
            self.nxt.resize(sched.state_counts[t + 1] as usize * slots_out, S::default());
            for (src, tr) in sched.levels[t].iter().enumerate() {
                let inp = &self.cur[src * slots_in..(src + 1) * slots_in];
                for sigma in 0..2 {
                    // A-weight exponent: +1 when this smoothing is the
                    // A-smoothing of the crossing as resolved.
                    let shift = if (sigma == 0) == bit { 1 } else { -1 };
                    let Trans { dst, loops } = tr[sigma];
                    let out =
                        &mut self.nxt[dst as usize * slots_out..(dst as usize + 1) * slots_out];
                    if !apply_taps(out, inp, lo_in, lo_out, shift, loops) {
                        return Err(BracketError::Overflow);
                    }
                }
            }
            std::mem::swap(&mut self.cur, &mut self.nxt);
        }
        let lo = sched.window_lo[sched.crossing_count];
        divide_by_delta(lo, &self.cur)
    }
}

/// Accumulates `inp * A^shift * delta^loops` into `out`, both step-2
/// windows anchored at `lo_in`/`lo_out`. Returns false on overflow.
#[inline]
fn apply_taps<S: EngineScalar>(
    out: &mut [S],
    inp: &[S],
    lo_in: i32,
    lo_out: i32,
    shift: i32,
    loops: u8,
) -> bool {
    // Slot offset of the tap at exponent offset `o`.
    let base = |o: i32| -> usize {
        let d = lo_in + shift + o - lo_out;
        debug_assert!(d >= 0 && d % 2 == 0);
        (d / 2) as usize
    };
    match loops {
        0 => acc(out, inp, base(0), false),
        1 => {
            // delta = -A^2 - A^-2
            acc(out, inp, base(2), true) && acc(out, inp, base(-2), true)
        }
        2 => {
            // delta^2 = A^4 + 2 + A^-4
            acc(out, inp, base(4), false)
                && acc(out, inp, base(0), false)
                && acc(out, inp, base(0), false)
                && acc(out, inp, base(-4), false)
        }
        _ => unreachable!("a crossing closes at most two loops"),
    }
}

#[inline]
fn acc<S: EngineScalar>(out: &mut [S], inp: &[S], off: usize, negate: bool) -> bool {
    let dst = &mut out[off..off + inp.len()];
    if negate {
        for (o, i) in dst.iter_mut().zip(inp) {
            if !o.sub_assign_checked(i) {
                return false;
            }
        }
    } else {
        for (o, i) in dst.iter_mut().zip(inp) {
            if !o.add_assign_checked(i) {
                return false;
            }
        }
    }
    true
}

/// Exact division of the final window by `delta = -A^2 - A^-2` (the sweep
/// closes every loop, so its raw result is `delta` times the normalized
/// bracket).
///
/// With `f[i]` at exponent `lo + 2i` and `g[j]` at `lo + 2(j + 1)`, the
/// product relation reads `f[i] = -g[i-2] - g[i]`; solving top-down gives
/// `g[i-2] = -f[i] - g[i]`, and the two lowest slots of `f` must then agree.
fn divide_by_delta<S: EngineScalar>(lo: i32, f: &[S]) -> Result<BracketWindow<S>, BracketError> {
    let m = f.len();
    if f.iter().all(|c| c.is_zero()) {
        return Ok(BracketWindow { lo: 0, coeffs: Vec::new() });
    }
    if m < 3 {
        return Err(BracketError::Internal("window not divisible by delta"));
    }
    let mut g = vec![S::default(); m - 2];
    for i in (2..m).rev() {
        let mut v = S::neg_of(&f[i]);
        if i < g.len() {
            let upper = g[i].clone();
            if !v.sub_assign_checked(&upper) {
                return Err(BracketError::Overflow);
            }
        }
        g[i - 2] = v;
    }
    let zero = S::default();
    let g1 = g.get(1).unwrap_or(&zero);
    if f[0] != S::neg_of(&g[0]) || f[1] != S::neg_of(g1) {
        return Err(BracketError::Internal("window not divisible by delta"));
    }
    Ok(BracketWindow { lo: lo + 2, coeffs: g })
}

// ----------------------------------------------------------------------
// Modular scalar evaluation (Mersenne prime 2^61 - 1)
// ----------------------------------------------------------------------

pub(crate) const MOD_P: u64 = (1 << 61) - 1;

#[inline]
pub(crate) fn mod_mul(a: u64, b: u64) -> u64 {
    let x = a as u128 * b as u128;
    let folded = (x & MOD_P as u128) as u64 + (x >> 61) as u64;
    let r = (folded & MOD_P) + (folded >> 61);
    if r >= MOD_P {
        r - MOD_P
    } else {
        r
    }
}

#[inline]
pub(crate) fn mod_add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MOD_P {
        s - MOD_P
    } else {
        s
    }
}

#[inline]
pub(crate) fn mod_sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MOD_P - b
    }
}

pub(crate) fn mod_pow(mut base: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    base %= MOD_P;
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_mul(acc, base);
        }
        base = mod_mul(base, base);
        e >>= 1;
    }
    acc
}

pub(crate) fn mod_inv(a: u64) -> u64 {
    mod_pow(a, MOD_P - 2)
}

/// Scalar sweep: the normalized bracket evaluated at `A = alpha` mod
/// `2^61 - 1`. Same schedule, weights collapsed to field elements.
pub(crate) struct ModSweeper<'a> {
    sched: &'a SweepSchedule,
    /// `wt[sigma_is_a][loops]`
    wt: [[u64; 3]; 2],
    delta_inv: u64,
    cur: Vec<u64>,
    nxt: Vec<u64>,
}

impl<'a> ModSweeper<'a> {
    pub fn new(sched: &'a SweepSchedule, alpha: u64) -> Self {
        let alpha = alpha % MOD_P;
        let a_inv = mod_inv(alpha);
        let a2 = mod_mul(alpha, alpha);
        let a2_inv = mod_mul(a_inv, a_inv);
        let delta = mod_sub(0, mod_add(a2, a2_inv));
        assert!(delta != 0, "degenerate evaluation point");
        let d2 = mod_mul(delta, delta);
        let wt = [
            [a_inv, mod_mul(a_inv, delta), mod_mul(a_inv, d2)],
            [alpha, mod_mul(alpha, delta), mod_mul(alpha, d2)],
        ];
        ModSweeper {
            sched,
            wt,
            delta_inv: mod_inv(delta),
            cur: Vec::new(),
            nxt: Vec::new(),
        }
    }

    pub fn run(&mut self, over: impl Fn(usize) -> bool) -> u64 {
        let sched = self.sched;
        self.cur.clear();
        self.cur.push(1);
        for t in 0..sched.crossing_count {
            let bit = over(t);
            self.nxt.clear();
            self.nxt.resize(sched.state_counts[t + 1] as usize, 0);
            for (src, tr) in sched.levels[t].iter().enumerate() {
                let v = self.cur[src];
                if v == 0 {
                    continue;
                }
                for sigma in 0..2 {
                    let is_a = (sigma == 0) == bit;
                    let Trans { dst, loops } = tr[sigma];
                    let w = self.wt[usize::from(is_a)][loops as usize];
                    let slot = &mut self.nxt[dst as usize];
                    *slot = mod_add(*slot, mod_mul(v, w));
                }
            }
            std::mem::swap(&mut self.cur, &mut self.nxt);
        }
        mod_mul(self.cur[0], self.delta_inv)
    }
}

impl<S: EngineScalar> BracketWindow<S> {
    pub fn to_poly(&self) -> crate::laurent::LaurentPoly {
        let coeffs: Vec<BigInt> = self
            .coeffs
            .iter()
            .enumerate()
            .flat_map(|(i, c)| {
                let pad = if i == 0 { None } else { Some(BigInt::ZERO) };
                pad.into_iter().chain(std::iter::once(c.to_bigint()))
            })
            .collect();
        crate::laurent::LaurentPoly::new(self.lo as i64, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::statesum::{self, Smoothing};
    use crate::lattice::{LatticeDiagram, Resolution};
    use crate::laurent::LaurentPoly;

    fn sweep_bracket(d: &LatticeDiagram, r: &Resolution) -> LaurentPoly {
        let sched = compile(&TangleInput::from_lattice(d)).unwrap();
        assert!(sched.fits_i64());
        let mut sweeper = WindowSweeper::<i64>::new(&sched);
        sweeper.run(|t| r.is_over(t)).unwrap().to_poly()
    }

    #[test]
    fn one_crossing_matches_statesum() {
        let d = LatticeDiagram::build(0);
        for text in ["+", "-"] {
            let r = Resolution::parse(text, 0).unwrap();
            assert_eq!(
                sweep_bracket(&d, &r),
                statesum::bracket_statesum(&d, &r, None).unwrap(),
                "resolution {text}"
            );
        }
    }

    #[test]
    fn engine_equivalence_exhaustive_n1() {
        let d = LatticeDiagram::build(1);
        let sched = compile(&TangleInput::from_lattice(&d)).unwrap();
        let mut sweeper = WindowSweeper::<i64>::new(&sched);
        for bits in 0u64..512 {
            let r = Resolution::from_bits(bits, 9);
            let via_sweep = sweeper.run(|t| r.is_over(t)).unwrap().to_poly();
            let via_sum = statesum::bracket_statesum(&d, &r, None).unwrap();
            assert_eq!(via_sweep, via_sum, "bits {bits:#011b}");
        }
    }

    #[test]
    fn schedule_loops_match_component_oracle() {
        let d = LatticeDiagram::build(1);
        let sched = compile(&TangleInput::from_lattice(&d)).unwrap();
        for bits in 0u64..512 {
            let s = Smoothing::from_bits(bits, 9);
            assert_eq!(
                sched.trace_loops(|t| bits >> t & 1 == 1),
                statesum::smoothing_components(&d, &s).unwrap(),
                "smoothing {bits:#011b}"
            );
        }

        let d2 = LatticeDiagram::build(2);
        let sched2 = compile(&TangleInput::from_lattice(&d2)).unwrap();
        let mut x = 0x9e3779b97f4a7c15u64;
        for _ in 0..500 {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let bits = x >> 32 & (1 << 25) - 1;
            let s = Smoothing::from_bits(bits, 25);
            assert_eq!(
                sched2.trace_loops(|t| bits >> t & 1 == 1),
                statesum::smoothing_components(&d2, &s).unwrap()
            );
        }
    }

    #[test]
    fn pd_route_matches_native() {
        let d = LatticeDiagram::build(1);
        let native_sched = compile(&TangleInput::from_lattice(&d)).unwrap();
        let mut native = WindowSweeper::<i64>::new(&native_sched);
        for bits in [0u64, 1, 73, 0b101010101, 511, 340, 85] {
            let r = Resolution::from_bits(bits, 9);
            let pd = d.to_pd(&r).unwrap();
            let pd_sched = compile(&TangleInput::from_pd(&pd).unwrap()).unwrap();
            let mut sweeper = WindowSweeper::<i64>::new(&pd_sched);
            // Every PD crossing is already resolved; its A-smoothing is
            // pairing 0 by construction.
            let via_pd = sweeper.run(|_| true).unwrap().to_poly();
            let direct = native.run(|t| r.is_over(t)).unwrap().to_poly();
            assert_eq!(via_pd, direct, "bits {bits:#011b}");
        }
    }

    #[test]
    fn modular_evaluation_matches_window() {
        let d = LatticeDiagram::build(1);
        let sched = compile(&TangleInput::from_lattice(&d)).unwrap();
        let alpha = 0x1234_5678_9abc_u64;
        let mut scalar = ModSweeper::new(&sched, alpha);
        let mut full = WindowSweeper::<i64>::new(&sched);
        for bits in 0u64..512 {
            let r = Resolution::from_bits(bits, 9);
            let w = full.run(|t| r.is_over(t)).unwrap();
            let mut expect = 0u64;
            let mut apow = mod_pow(mod_inv(alpha), (-(w.lo as i64)).rem_euclid(MOD_P as i64 - 1) as u64);
            let a2 = mod_mul(alpha, alpha);
            for c in &w.coeffs {
                let cm = if *c >= 0 { *c as u64 % MOD_P } else { MOD_P - (-*c as u64 % MOD_P) } % MOD_P;
                expect = mod_add(expect, mod_mul(cm, apow));
                apow = mod_mul(apow, a2);
            }
            assert_eq!(scalar.run(|t| r.is_over(t)), expect, "bits {bits:#011b}");
        }
    }

    #[test]
    fn frontier_stays_small() {
        for n in 0..=2 {
            let d = LatticeDiagram::build(n);
            let sched = compile(&TangleInput::from_lattice(&d)).unwrap();
            assert!(
                sched.max_open_ports <= 2 * d.side() + 6,
                "n = {n}: frontier {} too wide",
                sched.max_open_ports
            );
            assert!(sched.state_counts.iter().all(|&s| s >= 1));
        }
    }
}
