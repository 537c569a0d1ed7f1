//! Depth-first enumeration of resolutions over a compiled schedule.
//!
//! Resolutions sharing a prefix of crossing bits share the sweep state up to
//! that depth, so enumerating all of them as a depth-first tree costs about
//! one crossing step per tree node instead of a full sweep per leaf. The
//! scan fixes the low `prefix_len` crossing bits (callers partition work by
//! prefix) and walks every completion, handing each leaf's reduced Jones
//! polynomial to the sink as a trimmed dense window in `q`.

use super::sweep::{SweepSchedule, Trans};
use super::BracketError;

/// Walks all resolutions with the given low-bit prefix. The sink receives
/// `(resolution bits, lowest q exponent, dense q coefficients)`; the slice
/// is trimmed (non-zero ends) unless the polynomial is zero.
pub(crate) fn scan_resolutions_i64<F>(
    sched: &SweepSchedule,
    plus_signs: &[i8],
    prefix_bits: u64,
    prefix_len: usize,
    sink: F,
) -> Result<(), BracketError>
where
    F: FnMut(u64, i32, &[i64]),
{
    let c = sched.crossing_count;
    assert!(c <= 63, "resolution ids are packed in u64");
    assert!(prefix_len <= c);
    assert_eq!(plus_signs.len(), c);
    if !sched.fits_i64() {
        return Err(BracketError::Overflow);
    }
    let mut dfs = Dfs {
        sched,
        signs: plus_signs,
        bufs: (0..=c)
            .map(|t| vec![0i64; sched.state_counts[t] as usize * sched.window_slots[t] as usize])
            .collect(),
        g: Vec::new(),
        q: Vec::new(),
        sink,
    };
    dfs.bufs[0][0] = 1;
    let mut writhe = 0i64;
    for t in 0..prefix_len {
        let bit = prefix_bits >> t & 1 == 1;
        dfs.apply(t, bit);
        writhe += dfs.sign(t, bit);
    }
    dfs.go(prefix_len, prefix_bits & ((1 << prefix_len) - 1), writhe);
    Ok(())
}

struct Dfs<'a, F> {
    sched: &'a SweepSchedule,
    signs: &'a [i8],
    /// One window buffer per level: `state * slots + slot`.
    bufs: Vec<Vec<i64>>,
    g: Vec<i64>,
    q: Vec<i64>,
    sink: F,
}

impl<F: FnMut(u64, i32, &[i64])> Dfs<'_, F> {
    #[inline]
    fn sign(&self, t: usize, bit: bool) -> i64 {
        let s = self.signs[t] as i64;
        if bit {
            s
        } else {
            -s
        }
    }

    /// One crossing step: bufs[t] -> bufs[t + 1] under resolution `bit`.
    fn apply(&mut self, t: usize, bit: bool) {
        let slots_in = self.sched.window_slots[t] as usize;
        let slots_out = self.sched.window_slots[t + 1] as usize;
        let lo_in = self.sched.window_lo[t];
        let lo_out = self.sched.window_lo[t + 1];
        let (head, tail) = self.bufs.split_at_mut(t + 1);
        let src_buf = &head[t];
        let dst_buf = &mut tail[0];
        dst_buf.fill(0);
        for (src, tr) in self.sched.levels[t].iter().enumerate() {
            let inp = &src_buf[src * slots_in..(src + 1) * slots_in];
            for sigma in 0..2 {
                let shift = if (sigma == 0) == bit { 1 } else { -1 };
                let Trans { dst, loops } = tr[sigma];
                let out = &mut dst_buf[dst as usize * slots_out..(dst as usize + 1) * slots_out];
                let base = |o: i32| ((lo_in + shift + o - lo_out) / 2) as usize;
                match loops {
                    0 => add_into(out, inp, base(0), 1),
                    1 => {
                        add_into(out, inp, base(2), -1);
                        add_into(out, inp, base(-2), -1);
                    }
                    2 => {
                        add_into(out, inp, base(4), 1);
                        add_into(out, inp, base(0), 2);
                        add_into(out, inp, base(-4), 1);
                    }
                    _ => unreachable!("a crossing closes at most two loops"),
                }
            }
        }
    }

    fn go(&mut self, t: usize, id: u64, writhe: i64) {
        if t == self.sched.crossing_count {
            self.leaf(id, writhe);
            return;
        }
        self.apply(t, false);
        self.go(t + 1, id, writhe + self.sign(t, false));
        self.apply(t, true);
        self.go(t + 1, id | 1 << t, writhe + self.sign(t, true));
    }

    /// Divide the final window by delta, normalize by the writhe, convert to
    /// `q`, and emit.
    fn leaf(&mut self, id: u64, writhe: i64) {
        let c = self.sched.crossing_count;
        let f = &self.bufs[c];
        let m = f.len();
        debug_assert!(m >= 3);
        self.g.clear();
        self.g.resize(m - 2, 0);
        for i in (2..m).rev() {
            let upper = if i < m - 2 { self.g[i] } else { 0 };
            self.g[i - 2] = -f[i] - upper;
        }
        debug_assert_eq!(f[0], -self.g[0]);
        debug_assert_eq!(f[1], -*self.g.get(1).unwrap_or(&0));

        let (mut i0, mut i1) = (usize::MAX, 0usize);
        for (i, &v) in self.g.iter().enumerate() {
            if v != 0 {
                if i0 == usize::MAX {
                    i0 = i;
                }
                i1 = i;
            }
        }
        debug_assert_ne!(i0, usize::MAX, "bracket vanished");

        let negate = writhe.rem_euclid(2) == 1;
        self.q.clear();
        for j in (i0..=i1).rev() {
            self.q.push(if negate { -self.g[j] } else { self.g[j] });
        }
        let lo_a = self.sched.window_lo[c] as i64 + 2 - 3 * writhe;
        let e_top = lo_a + 2 * i1 as i64;
        debug_assert_eq!(e_top % 2, 0);
        (self.sink)(id, (-e_top / 2) as i32, &self.q);
    }
}

#[inline]
fn add_into(out: &mut [i64], inp: &[i64], off: usize, scale: i64) {
    let dst = &mut out[off..off + inp.len()];
    match scale {
        1 => {
            for (o, i) in dst.iter_mut().zip(inp) {
                *o += i;
            }
        }
        -1 => {
            for (o, i) in dst.iter_mut().zip(inp) {
                *o -= i;
            }
        }
        s => {
            for (o, i) in dst.iter_mut().zip(inp) {
                *o += s * i;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::sweep::{compile, TangleInput};
    use crate::bracket::{jones, Engine};
    use crate::lattice::{LatticeDiagram, Resolution};
    use crate::laurent::LaurentPoly;
    use num_bigint::BigInt;

    fn poly_from_window(q_lo: i32, coeffs: &[i64]) -> LaurentPoly {
        LaurentPoly::new(q_lo as i64, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn scan_matches_per_resolution_jones_n1() {
        let d = LatticeDiagram::build(1);
        let sched = compile(&TangleInput::from_lattice(&d)).unwrap();
        let signs = d.plus_signs();
        let mut seen = vec![None; 512];
        scan_resolutions_i64(&sched, &signs, 0, 0, |id, q_lo, coeffs| {
            assert!(seen[id as usize].is_none());
            seen[id as usize] = Some(poly_from_window(q_lo, coeffs));
        })
        .unwrap();
        for bits in 0u64..512 {
            let r = Resolution::from_bits(bits, 9);
            assert_eq!(
                seen[bits as usize].clone().unwrap(),
                jones(&d, &r, Engine::Sweep).unwrap(),
                "bits {bits:#011b}"
            );
        }
    }

    #[test]
    fn prefix_partitions_cover_everything() {
        let d = LatticeDiagram::build(1);
        let sched = compile(&TangleInput::from_lattice(&d)).unwrap();
        let signs = d.plus_signs();
        let mut full = Vec::new();
        scan_resolutions_i64(&sched, &signs, 0, 0, |id, q_lo, coeffs| {
            full.push((id, poly_from_window(q_lo, coeffs)));
        })
        .unwrap();
        full.sort_by_key(|e| e.0);

        let mut split = Vec::new();
        for prefix in 0u64..16 {
            scan_resolutions_i64(&sched, &signs, prefix, 4, |id, q_lo, coeffs| {
                split.push((id, poly_from_window(q_lo, coeffs)));
            })
            .unwrap();
        }
        split.sort_by_key(|e| e.0);
        assert_eq!(full, split);
    }

    #[test]
    fn scan_n0() {
        let d = LatticeDiagram::build(0);
        let sched = compile(&TangleInput::from_lattice(&d)).unwrap();
        let signs = d.plus_signs();
        let mut count = 0;
        scan_resolutions_i64(&sched, &signs, 0, 0, |_, q_lo, coeffs| {
            assert_eq!((q_lo, coeffs), (0, &[1i64][..]));
            count += 1;
        })
        .unwrap();
        assert_eq!(count, 2);
    }
}
