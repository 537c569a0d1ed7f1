use lattice_knots::bracket::{jones, Engine};
use lattice_knots::{LatticeDiagram, Resolution};

// Independent determinant computation via the Goeritz matrix of the
// checkerboard coloring, using only the rotation system.
fn determinant(n: usize, r: &Resolution) -> i64 {
    let d = LatticeDiagram::build(n);
    let v = d.crossings();
    let exit_stub = |p: &lattice_knots::lattice::Passage| -> usize {
        let dir = match (p.horizontal, p.forward) {
            (true, true) => 2usize, (true, false) => 0, (false, true) => 1, (false, false) => 3,
        };
        p.crossing * 4 + dir
    };
    let entry_stub = |p: &lattice_knots::lattice::Passage| -> usize {
        let dir = match (p.horizontal, p.forward) {
            (true, true) => 0usize, (true, false) => 2, (false, true) => 3, (false, false) => 1,
        };
        p.crossing * 4 + dir
    };
    let tr = d.trace();
    let len = tr.len();
    let mut partner = vec![usize::MAX; 4 * v];
    for k in 0..len {
        let a = exit_stub(&tr[k]);
        let b = entry_stub(&tr[(k + 1) % len]);
        partner[a] = b;
        partner[b] = a;
    }
    // dirs: W=0 N=1 E=2 S=3 ; ccw: E->N->W->S ; cw: inverse
    let cw = |dir: usize| -> usize { match dir { 1 => 2, 0 => 1, 3 => 0, 2 => 3, _ => unreachable!() } };
    // Face id per dart, where dart = "leaving stub s": face corner rule: arrive b, leave cw(b).
    let mut face_of_dart = vec![usize::MAX; 4 * v];
    let mut faces = 0usize;
    for start in 0..4 * v {
        if face_of_dart[start] != usize::MAX { continue; }
        let mut s = start;
        loop {
            face_of_dart[s] = faces;
            let arrive = partner[s];
            s = (arrive / 4) * 4 + cw(arrive % 4);
            if s == start { break; }
        }
        faces += 1;
    }
    // Quadrant between stub x and cw(x) at vertex: belongs to face of dart leaving cw(x)?
    // Face walk: ... arrive at stub b, leave from cw(b): the corner crossed is between b and cw(b).
    // So quadrant (b, cw(b)) is in face_of_dart[vertex*4 + cw(b)].
    let quad_face = |vtx: usize, b: usize| -> usize { face_of_dart[vtx * 4 + cw(b)] };
    // 2-color faces: adjacency across arcs: the two faces along an arc.
    // Arc from stub a to stub b=partner[a]: one side face_of_dart[a]; other side: face containing
    // dart leaving b i.e. face_of_dart[b]? The two sides of the arc are face_of_dart[a] and face_of_dart[b].
    let mut color = vec![-1i8; faces];
    let mut stack = vec![0usize];
    color[face_of_dart[0]] = 0;
    let mut pending = vec![face_of_dart[0]];
    stack.clear();
    while let Some(f) = pending.pop() {
        for s in 0..4 * v {
            if face_of_dart[s] == f {
                let other = face_of_dart[partner[s]];
                if color[other] == -1 {
                    color[other] = 1 - color[f];
                    pending.push(other);
                } else if color[other] == color[f] {
                    panic!("faces not 2-colorable");
                }
            }
        }
    }
    // White faces = color 0.
    let whites: Vec<usize> = (0..faces).filter(|&f| color[f] == 0).collect();
    let widx: std::collections::HashMap<usize, usize> =
        whites.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let m = whites.len();
    let mut g = vec![vec![0i64; m]; m];
    for ci in 0..v {
        // quadrants: between stub b and cw(b) for b in {E,N,W,S}:
        // (E,S)=SE? cw(E)=S so (E -> quadrant between E and S) = SE quadrant... label by b: b=2(E):SE, b=1(N):NE, b=0(W):NW, b=3(S):SW
        let f_se = quad_face(ci, 2); let f_ne = quad_face(ci, 1);
        let f_nw = quad_face(ci, 0); let f_sw = quad_face(ci, 3);
        // white pair is {NE,SW} or {NW,SE}
        let (wa, wb, white_is_nesw) = if color[f_ne] == 0 {
            assert_eq!(color[f_sw], 0); (f_ne, f_sw, true)
        } else {
            assert_eq!(color[f_nw], 0); assert_eq!(color[f_se], 0); (f_nw, f_se, false)
        };
        // A-regions: '+' (horizontal over): {NE,SW}; '-': {NW,SE}
        let a_is_nesw = r.is_over(ci);
        let eta = if white_is_nesw == a_is_nesw { 1i64 } else { -1 };
        let (i, j) = (widx[&wa], widx[&wb]);
        if i != j {
            g[i][j] -= eta;
            g[j][i] -= eta;
            g[i][i] += eta;
            g[j][j] += eta;
        }
    }
    // determinant of minor (drop last row/col), integer Bareiss
    let k = m - 1;
    let mut a: Vec<Vec<i128>> = (0..k).map(|i| (0..k).map(|j| g[i][j] as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for p in 0..k {
        if a[p][p] == 0 {
            let swap = (p + 1..k).find(|&r2| a[r2][p] != 0);
            match swap {
                Some(r2) => { a.swap(p, r2); sign = -sign; }
                None => return 0,
            }
        }
        for i2 in p + 1..k {
            for j2 in p + 1..k {
                a[i2][j2] = (a[i2][j2] * a[p][p] - a[i2][p] * a[p][j2]) / prev;
            }
            a[i2][p] = 0;
        }
        prev = a[p][p];
    }
    (sign * a.last().map(|row| *row.last().unwrap()).unwrap_or(1)).unsigned_abs() as i64
}

fn main() {
    let d1 = LatticeDiagram::build(1);
    for (label, text) in [
        ("all plus (unknot?)", "+++++++++"),
        ("embed(0,2)", "--+-+++++"),
        ("embed(2,0)", "+++++-+--"),
        ("alternating 7_4", "+-+-+-+-+"),
    ] {
        let r = Resolution::parse(text, 1).unwrap();
        let j = jones(&d1, &r, Engine::Sweep).unwrap();
        println!("{label}: det = {}, jones = {}", determinant(1, &r), j);
    }
}
