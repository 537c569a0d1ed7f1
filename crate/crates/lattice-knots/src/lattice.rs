//! Potholder lattice diagrams: construction, strand tracing, resolutions,
//! and the constructions derived from them (mirror, embedding, the
//! alternating "endless" resolution, PD export).
//!
//! Geometry and conventions, fixed once for the whole crate:
//!
//! * The grid has `2n+1` rows and `2n+1` columns of crossings; `(row, col)`
//!   with row 0 at the top, column 0 at the left. Crossing indices are
//!   row-major.
//! * Closure: rows are traversed boustrophedon (row 0 left to right), with
//!   exterior u-turns joining row ends on alternating sides; the end of the
//!   last row turns around the lower-right corner into the bottom of the
//!   last column; columns are traversed boustrophedon right to left with
//!   u-turns above and below; the top of column 0 turns around the
//!   upper-left corner back into the start of row 0. All exterior arcs nest
//!   without crossing, so the diagram has exactly `(2n+1)^2` crossings, and
//!   the two corner joins are immediate self-returns of the curve.
//! * A resolution assigns `+` (horizontal strand over vertical) or `-`
//!   (under) to every crossing, in row-major order.

use std::fmt;

use thiserror::Error;

/// Stub directions around a crossing, in visual terms (north = up).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Dir {
    West = 0,
    North = 1,
    East = 2,
    South = 3,
}

impl Dir {
    /// Next direction counterclockwise (E -> N -> W -> S -> E).
    pub(crate) fn ccw(self) -> Dir {
        match self {
            Dir::East => Dir::North,
            Dir::North => Dir::West,
            Dir::West => Dir::South,
            Dir::South => Dir::East,
        }
    }
}

/// One visit of the closed curve to a crossing, along one of its two axes.
#[derive(Clone, Copy, Debug)]
pub struct Passage {
    pub crossing: usize,
    pub horizontal: bool,
    /// Travel direction: rightwards for horizontal passages, upwards for
    /// vertical ones.
    pub forward: bool,
}

impl Passage {
    fn entry_dir(&self) -> Dir {
        match (self.horizontal, self.forward) {
            (true, true) => Dir::West,
            (true, false) => Dir::East,
            (false, true) => Dir::South,
            (false, false) => Dir::North,
        }
    }

    fn exit_dir(&self) -> Dir {
        match (self.horizontal, self.forward) {
            (true, true) => Dir::East,
            (true, false) => Dir::West,
            (false, true) => Dir::North,
            (false, false) => Dir::South,
        }
    }
}

/// The potholder curve for size parameter `n`, with its full trace.
///
/// Immutable after construction; engines share it read-only.
pub struct LatticeDiagram {
    n: usize,
    side: usize,
    trace: Vec<Passage>,
    /// `arc_ends[a] = [stub, stub]`: arc `a` runs along the curve from the
    /// exit stub of passage `a` to the entry stub of passage `a + 1`.
    arc_ends: Vec<[usize; 2]>,
    /// Stub id (`crossing * 4 + dir`) to `(arc, end)`.
    stub_arc: Vec<(u32, u8)>,
    /// Per crossing: trace indices of its horizontal and vertical passages.
    passage_at: Vec<[u32; 2]>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("resolution has {got} crossings but the diagram has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("resolution text has {got} characters, expected {expected}")]
    BadLength { expected: usize, got: usize },
    #[error("bad resolution character {ch:?} at position {pos} (expected '+' or '-')")]
    BadChar { pos: usize, ch: char },
    #[error("the 1-crossing diagram (n = 0) has no alternating knot")]
    AlternatingUnknot,
    #[error("embedding requires block size k = {k} <= n = {n}")]
    EmbedSizeOrder { k: usize, n: usize },
    #[error("embedding offsets must be even, got ({row_off}, {col_off})")]
    EmbedOffsetParity { row_off: usize, col_off: usize },
    #[error("block of side {block_side} at offset ({row_off}, {col_off}) leaves the {side}x{side} grid")]
    EmbedOutOfRange { block_side: usize, row_off: usize, col_off: usize, side: usize },
}

impl LatticeDiagram {
    /// Builds the potholder curve for size parameter `n` under the
    /// corner-joined serpentine closure described in the module docs.
    pub fn build(n: usize) -> Self {
        let side = 2 * n + 1;
        let crossings = side * side;
        let mut trace = Vec::with_capacity(2 * crossings);
        // Row path, boustrophedon from the top.
        for i in 0..side {
            let rightwards = i % 2 == 0;
            for step in 0..side {
                let j = if rightwards { step } else { side - 1 - step };
                trace.push(Passage { crossing: i * side + j, horizontal: true, forward: rightwards });
            }
        }
        // Column path, boustrophedon from the right: the end of the last row
        // turns around the lower-right corner into the bottom of the last
        // column, and the top of column 0 turns around the upper-left corner
        // back into the start of row 0. The two corner crossings are where
        // the curve revisits itself immediately, which is what makes the
        // alternating resolution reducible by exactly two crossings.
        for j in (0..side).rev() {
            let upwards = j % 2 == 0;
            for step in 0..side {
                let i = if upwards { side - 1 - step } else { step };
                trace.push(Passage { crossing: i * side + j, horizontal: false, forward: upwards });
            }
        }
        debug_assert_eq!(trace.len(), 2 * crossings);

        let mut passage_at = vec![[u32::MAX; 2]; crossings];
        for (t, p) in trace.iter().enumerate() {
            let slot = if p.horizontal { 0 } else { 1 };
            assert_eq!(passage_at[p.crossing][slot], u32::MAX, "crossing visited twice on one axis");
            passage_at[p.crossing][slot] = t as u32;
        }
        assert!(
            passage_at.iter().all(|v| v[0] != u32::MAX && v[1] != u32::MAX),
            "trace must visit every crossing on both axes"
        );

        let len = trace.len();
        let mut arc_ends = Vec::with_capacity(len);
        let mut stub_arc = vec![(u32::MAX, 0u8); 4 * crossings];
        for a in 0..len {
            let from = &trace[a];
            let to = &trace[(a + 1) % len];
            let s0 = from.crossing * 4 + from.exit_dir() as usize;
            let s1 = to.crossing * 4 + to.entry_dir() as usize;
            arc_ends.push([s0, s1]);
            for (end, s) in [(0u8, s0), (1u8, s1)] {
                assert_eq!(stub_arc[s].0, u32::MAX, "stub used by two arcs");
                stub_arc[s] = (a as u32, end);
            }
        }

        LatticeDiagram { n, side, trace, arc_ends, stub_arc, passage_at }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Grid side `2n+1`.
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn crossings(&self) -> usize {
        self.side * self.side
    }

    /// The full cyclic trace: `2 (2n+1)^2` passages.
    pub fn trace(&self) -> &[Passage] {
        &self.trace
    }

    pub(crate) fn arc_count(&self) -> usize {
        self.arc_ends.len()
    }

    pub(crate) fn arc_ends(&self) -> &[[usize; 2]] {
        &self.arc_ends
    }

    /// `(arc, end)` for a stub id `crossing * 4 + dir`.
    pub(crate) fn stub_arc(&self, stub: usize) -> (usize, u8) {
        let (a, e) = self.stub_arc[stub];
        (a as usize, e)
    }

    pub(crate) fn checked(&self, r: &Resolution) -> Result<(), LatticeError> {
        if r.len() != self.crossings() {
            return Err(LatticeError::SizeMismatch { expected: self.crossings(), got: r.len() });
        }
        Ok(())
    }

    /// Signed crossing count of the oriented resolved diagram, right-hand
    /// convention.
    pub fn writhe(&self, r: &Resolution) -> Result<i64, LatticeError> {
        self.checked(r)?;
        let mut w = 0i64;
        for ci in 0..self.crossings() {
            w += self.crossing_sign(ci, r.is_over(ci)) as i64;
        }
        Ok(w)
    }

    /// Sign of one crossing: +1 when the under-strand direction turned
    /// counterclockwise by a quarter gives the over-strand direction.
    fn crossing_sign(&self, ci: usize, horizontal_over: bool) -> i32 {
        let h = &self.trace[self.passage_at[ci][0] as usize];
        let v = &self.trace[self.passage_at[ci][1] as usize];
        // Direction vectors in mathematical orientation (y up).
        let h_vec = if h.forward { (1i32, 0i32) } else { (-1, 0) };
        let v_vec = if v.forward { (0i32, 1i32) } else { (0, -1) };
        let (o, u) = if horizontal_over { (h_vec, v_vec) } else { (v_vec, h_vec) };
        let cross = o.0 * u.1 - o.1 * u.0;
        debug_assert!(cross == 1 || cross == -1);
        cross
    }

    /// Sign every crossing takes when resolved `+`; the `-` sign is its
    /// negation. Used for incremental writhe bookkeeping during scans.
    pub(crate) fn plus_signs(&self) -> Vec<i8> {
        (0..self.crossings()).map(|ci| self.crossing_sign(ci, true) as i8).collect()
    }

    /// Embeds a size-`k` resolution as a block at `(row_off, col_off)`
    /// inside this diagram, padding the remaining lines with an untying
    /// pattern, so the resulting lattice knot has the same knot type.
    ///
    /// Every line outside the block gets a distinct height level above the
    /// block; at each padded crossing the higher line passes over. Peeling
    /// the lines in descending level order removes them without disturbing
    /// the block.
    pub fn embed(
        &self,
        block: &Resolution,
        k: usize,
        row_off: usize,
        col_off: usize,
    ) -> Result<Resolution, LatticeError> {
        let n = self.n;
        if k > n {
            return Err(LatticeError::EmbedSizeOrder { k, n });
        }
        let block_side = 2 * k + 1;
        if block.len() != block_side * block_side {
            return Err(LatticeError::SizeMismatch { expected: block_side * block_side, got: block.len() });
        }
        if row_off % 2 != 0 || col_off % 2 != 0 {
            return Err(LatticeError::EmbedOffsetParity { row_off, col_off });
        }
        if row_off + block_side > self.side || col_off + block_side > self.side {
            return Err(LatticeError::EmbedOutOfRange { block_side, row_off, col_off, side: self.side });
        }

        let level = |off: usize, idx: usize| -> usize {
            // 0 inside the block; outside lines numbered outward from it.
            if idx < off {
                off - idx
            } else if idx < off + block_side {
                0
            } else {
                idx - (off + block_side) + 1
            }
        };
        let mut over = vec![false; self.crossings()];
        for i in 0..self.side {
            let lr = level(row_off, i);
            for j in 0..self.side {
                let lc = level(col_off, j);
                over[i * self.side + j] = if lr == 0 && lc == 0 {
                    block.is_over((i - row_off) * block_side + (j - col_off))
                } else {
                    // Rows outrank columns at equal level so the choice is
                    // total; equal nonzero levels do occur (one row and one
                    // column the same distance out), and either consistent
                    // choice unties.
                    lr >= lc
                };
            }
        }
        Ok(Resolution::from_bools(over))
    }

    /// The checkerboard resolution that makes the whole diagram alternating:
    /// `+` where `row + col` is even.
    pub fn alternating_resolution(n: usize) -> Result<Resolution, LatticeError> {
        if n == 0 {
            return Err(LatticeError::AlternatingUnknot);
        }
        let side = 2 * n + 1;
        let over = (0..side * side).map(|ci| (ci / side + ci % side) % 2 == 0).collect();
        Ok(Resolution::from_bools(over))
    }

    /// True when over/under strictly alternates along the trace.
    pub fn is_alternating(&self, r: &Resolution) -> Result<bool, LatticeError> {
        self.checked(r)?;
        let over: Vec<bool> = self
            .trace
            .iter()
            .map(|p| p.horizontal == r.is_over(p.crossing))
            .collect();
        Ok((0..over.len()).all(|t| over[t] != over[(t + 1) % over.len()]))
    }

    /// Standard PD encoding of the resolved diagram. Arc labels are 1-based
    /// and follow the trace order, which also orients every arc.
    pub fn to_pd(&self, r: &Resolution) -> Result<PlanarDiagram, LatticeError> {
        self.checked(r)?;
        let mut crossings = Vec::with_capacity(self.crossings());
        for ci in 0..self.crossings() {
            let under_passage = &self.trace[self.passage_at[ci][if r.is_over(ci) { 1 } else { 0 }] as usize];
            let mut dir = under_passage.entry_dir();
            let mut labels = [0u32; 4];
            for slot in labels.iter_mut() {
                let (arc, _) = self.stub_arc(ci * 4 + dir as usize);
                *slot = arc as u32 + 1;
                dir = dir.ccw();
            }
            crossings.push(labels);
        }
        Ok(PlanarDiagram { crossings, arc_count: self.arc_count() })
    }
}

/// Over/under assignment for every crossing of a diagram, row-major.
/// `+` means the horizontal strand passes over the vertical one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Resolution {
    over: Vec<bool>,
}

impl Resolution {
    pub fn from_bools(over: Vec<bool>) -> Self {
        Resolution { over }
    }

    /// All-`+` (or all-`-`) resolution for size parameter `n`.
    pub fn uniform(n: usize, plus: bool) -> Self {
        let side = 2 * n + 1;
        Resolution { over: vec![plus; side * side] }
    }

    /// Low `len` bits of `bits`, bit `i` (1 = `+`) for crossing `i`.
    pub fn from_bits(bits: u64, len: usize) -> Self {
        Resolution { over: (0..len).map(|i| bits >> i & 1 == 1).collect() }
    }

    /// Parses a row-major `+`/`-` string for size parameter `n`. The Unicode
    /// minus sign is accepted as `-`.
    pub fn parse(text: &str, n: usize) -> Result<Self, LatticeError> {
        let side = 2 * n + 1;
        let expected = side * side;
        let mut over = Vec::with_capacity(expected);
        for (pos, ch) in text.chars().enumerate() {
            match ch {
                '+' => over.push(true),
                '-' | '\u{2212}' => over.push(false),
                _ => return Err(LatticeError::BadChar { pos, ch }),
            }
        }
        if over.len() != expected {
            return Err(LatticeError::BadLength { expected, got: over.len() });
        }
        Ok(Resolution { over })
    }

    pub fn len(&self) -> usize {
        self.over.len()
    }

    pub fn is_empty(&self) -> bool {
        self.over.is_empty()
    }

    pub fn is_over(&self, crossing: usize) -> bool {
        self.over[crossing]
    }

    /// Flips every crossing, producing the mirror diagram.
    pub fn mirror(&self) -> Self {
        Resolution { over: self.over.iter().map(|b| !b).collect() }
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.over {
            f.write_str(if b { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Resolution({self})")
    }
}

/// A resolved diagram in the standard planar-diagram encoding: each crossing
/// lists its four incident arc labels counterclockwise, starting from the
/// incoming under-strand arc.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlanarDiagram {
    pub crossings: Vec<[u32; 4]>,
    pub arc_count: usize,
}

impl PlanarDiagram {
    /// `PD[X[a,b,c,d],...]` text form.
    pub fn to_text(&self) -> String {
        let xs: Vec<String> = self
            .crossings
            .iter()
            .map(|x| format!("X[{},{},{},{}]", x[0], x[1], x[2], x[3]))
            .collect();
        format!("PD[{}]", xs.join(","))
    }

    /// Checks that every arc label occurs exactly twice.
    pub fn is_well_formed(&self) -> bool {
        let mut seen = vec![0u8; self.arc_count + 1];
        for x in &self.crossings {
            for &l in x {
                if l == 0 || l as usize > self.arc_count {
                    return false;
                }
                seen[l as usize] += 1;
            }
        }
        seen[1..].iter().all(|&c| c == 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_small_diagrams() {
        let d0 = LatticeDiagram::build(0);
        assert_eq!(d0.crossings(), 1);
        assert_eq!(d0.trace().len(), 2);

        let d1 = LatticeDiagram::build(1);
        assert_eq!(d1.crossings(), 9);
        assert_eq!(d1.trace().len(), 18);

        let d2 = LatticeDiagram::build(2);
        assert_eq!(d2.crossings(), 25);
    }

    #[test]
    fn single_closed_curve_small_sizes() {
        // Construction asserts that every crossing is visited once per axis;
        // also check the arc structure is a single cycle of the right length.
        for n in 0..=4 {
            let d = LatticeDiagram::build(n);
            assert_eq!(d.arc_count(), 2 * d.crossings());
            let mut seen = vec![0u8; 4 * d.crossings()];
            for ends in d.arc_ends() {
                for &s in ends {
                    seen[s] += 1;
                }
            }
            assert!(seen.iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn writhe_one_crossing() {
        let d = LatticeDiagram::build(0);
        let plus = Resolution::parse("+", 0).unwrap();
        let minus = Resolution::parse("-", 0).unwrap();
        let wp = d.writhe(&plus).unwrap();
        let wm = d.writhe(&minus).unwrap();
        assert_eq!(wp.abs(), 1);
        assert_eq!(wp, -wm);
        // Regression: under this crate's conventions '+' at the origin is a
        // positive crossing.
        assert_eq!(wp, 1);
    }

    #[test]
    fn writhe_mirror_negates_exhaustive_n1() {
        let d = LatticeDiagram::build(1);
        for bits in 0u64..512 {
            let r = Resolution::from_bits(bits, 9);
            let m = r.mirror();
            assert_eq!(d.writhe(&r).unwrap(), -d.writhe(&m).unwrap());
        }
    }

    #[test]
    fn writhe_all_plus_regression() {
        // Hand-traced: the sign of '+' at (i, j) is (-1)^(i+j), so the all-'+'
        // writhe telescopes to 1 for every n.
        for n in [1usize, 2, 3] {
            let d = LatticeDiagram::build(n);
            let r = Resolution::uniform(n, true);
            assert_eq!(d.writhe(&r).unwrap(), 1);
        }
    }

    #[test]
    fn writhe_size_mismatch() {
        let d = LatticeDiagram::build(1);
        let r = Resolution::uniform(0, true);
        assert!(matches!(d.writhe(&r), Err(LatticeError::SizeMismatch { .. })));
    }

    #[test]
    fn mirror_is_involution() {
        for bits in 0u64..512 {
            let r = Resolution::from_bits(bits, 9);
            assert_eq!(r.mirror().mirror(), r);
        }
        assert_eq!(Resolution::parse("+", 0).unwrap().mirror().to_string(), "-");
    }

    #[test]
    fn parse_resolution_errors() {
        assert!(Resolution::parse("+", 0).is_ok());
        assert_eq!(
            Resolution::parse("++++++++", 1),
            Err(LatticeError::BadLength { expected: 9, got: 8 })
        );
        assert_eq!(
            Resolution::parse("++++x++++", 1),
            Err(LatticeError::BadChar { pos: 4, ch: 'x' })
        );
    }

    #[test]
    fn alternating_checkerboard() {
        assert_eq!(
            LatticeDiagram::alternating_resolution(0),
            Err(LatticeError::AlternatingUnknot)
        );
        let alt = LatticeDiagram::alternating_resolution(1).unwrap();
        assert_eq!(alt, Resolution::parse("+-+-+-+-+", 1).unwrap());
        for n in 1..=4 {
            let d = LatticeDiagram::build(n);
            let alt = LatticeDiagram::alternating_resolution(n).unwrap();
            assert!(d.is_alternating(&alt).unwrap());
            // The checkerboard and its mirror are the only alternating
            // resolutions; a small perturbation must break alternation.
            let mut over: Vec<bool> = (0..d.crossings()).map(|i| alt.is_over(i)).collect();
            over[0] = !over[0];
            assert!(!d.is_alternating(&Resolution::from_bools(over)).unwrap());
        }
    }

    #[test]
    fn pd_structure() {
        let d0 = LatticeDiagram::build(0);
        for r in [Resolution::parse("+", 0).unwrap(), Resolution::parse("-", 0).unwrap()] {
            let pd = d0.to_pd(&r).unwrap();
            assert_eq!(pd.crossings.len(), 1);
            assert!(pd.is_well_formed());
        }

        let d1 = LatticeDiagram::build(1);
        for bits in [0u64, 1, 0b101010101, 511] {
            let r = Resolution::from_bits(bits, 9);
            let pd = d1.to_pd(&r).unwrap();
            assert_eq!(pd.crossings.len(), 9);
            assert_eq!(pd.arc_count, 18);
            assert!(pd.is_well_formed());
        }
        let pd = d0.to_pd(&Resolution::parse("+", 0).unwrap()).unwrap();
        let text = pd.to_text();
        assert!(text.starts_with("PD[X[") && text.ends_with("]]"), "{text}");
    }

    #[test]
    fn embed_validation() {
        let d = LatticeDiagram::build(1);
        let block = Resolution::uniform(0, true);
        assert!(d.embed(&block, 0, 0, 0).is_ok());
        assert!(d.embed(&block, 0, 2, 2).is_ok());
        assert!(matches!(
            d.embed(&block, 0, 1, 0),
            Err(LatticeError::EmbedOffsetParity { .. })
        ));
        assert!(matches!(
            d.embed(&block, 0, 4, 0),
            Err(LatticeError::EmbedOutOfRange { .. })
        ));
        let big = Resolution::uniform(1, true);
        assert!(matches!(
            LatticeDiagram::build(0).embed(&big, 1, 0, 0),
            Err(LatticeError::EmbedSizeOrder { .. })
        ));
        // Block contents land verbatim.
        let block = Resolution::parse("-", 0).unwrap();
        let r = d.embed(&block, 0, 2, 2).unwrap();
        assert!(!r.is_over(8));
    }
}
