use k3dyn::mapclass::*;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const TOY_G: &str = "s2.s1.s0.s0.s1.s2.s2^-1.s2^-1.s1";

/// Stage words `g_0..g_7` as displayed, `g_3` in contracted notation.
pub const REAL_STAGES: [&str; 8] = [
    "s1.s2.s0.s1.s3.s4.s5^-1.s6^-1.s7^-1.s8^-1.s8^-1.s7.s6.s5^-1",
    "s2.s3.s4.s5.s6^-1.s7^-1.s8^-1.s8^-1.s7",
    "s3.s4.s5.s6.s7^-1.s8^-1",
    "s4.s5.s6.s7^-1.s7^-1.s6^-1.s5^-1.s4^-1.~s3^-1.~s3^-1.s4^-1",
    "s5.s6.s7.s8^-1.s8^-1.s7^-1.s6^-1.s5^-1.s4^-1.s3^-1.s2^-1.s1^-1.s0^-1.s0^-1.s1^-1.s2^-1.s3^-1.s4^-1.s5^-1.s6^-1.s7^-1.s8^-1",
    "s6.s7.s8^-1.s8^-1.s7^-1.s6^-1.s5^-1.s4^-1.s3^-1.s2^-1.s1^-1.s0^-1.s0^-1.s1^-1.s2^-1.s3^-1.s4^-1.s5^-1.s6^-1.s7",
    "s7.s8^-1.s8^-1.s7^-1.s6^-1.s5^-1.s4^-1.s3^-1.s2^-1.s1^-1.s0^-1.s0^-1.s1^-1.s2^-1.s3^-1.s4^-1.s5^-1.s6^-1.s7^-1",
    "s8^-1.s8^-1.s7^-1.s6^-1.s5^-1.s4^-1.s3^-1.s2^-1.s1^-1.s0^-1.s0^-1.s1^-1.s2^-1.s3^-1.s4^-1.s5^-1.s6^-1.s7^-1",
];

pub fn word(s: &str) -> TwistWord {
    s.parse().unwrap()
}

/// Inputs `f′(p_i) = g⁻¹(p_i)` for the four-puncture example.
pub fn toy_corpus() -> Vec<ArcData> {
    let inv = word(TOY_G).inverse();
    (0..3).map(|i| ArcData::straight(4, i).apply(&inv).unwrap()).collect()
}

/// Every valid arc-data on `n` punctures with at most `max_len` crossings.
pub fn all_arcdata(n: usize, max_len: usize) -> Vec<ArcData> {
    fn walk(n: usize, strip: usize, ev: &mut Vec<Event>, max_len: usize, start: usize, out: &mut Vec<ArcData>) {
        for end in [strip.wrapping_sub(1), strip] {
            if end < n && end != start {
                if let Ok(d) = ArcData::new(n, start, end, ev.clone()) {
                    if d.events().len() == ev.len() {
                        out.push(d);
                    }
                }
            }
        }
        if ev.len() == max_len {
            return;
        }
        for door in [strip.wrapping_sub(1), strip] {
            if door >= n {
                continue;
            }
            let next = if strip == door { door + 1 } else { door };
            for side in [Side::Over, Side::Under] {
                ev.push(Event { puncture: door, side });
                walk(n, next, ev, max_len, start, out);
                ev.pop();
            }
        }
    }
    let mut out = Vec::new();
    for start in 0..n {
        for strip in [start, start + 1] {
            walk(n, strip, &mut Vec::new(), max_len, start, &mut out);
        }
    }
    out.sort_by_key(|d| d.to_string());
    out.dedup();
    out
}

/// Braid and far-commutation relations on `n` punctures, all sign choices,
/// plus `s_k s_k⁻¹ = 1`.
pub fn relation_pairs(n: usize) -> Vec<(TwistWord, TwistWord)> {
    let mut pairs = Vec::new();
    for k in 0..n - 2 {
        for e in [false, true] {
            let (a, b) = (Twist { index: k, inverse: e }, Twist { index: k + 1, inverse: e });
            pairs.push((TwistWord(vec![a, b, a]), TwistWord(vec![b, a, b])));
        }
    }
    for j in 0..n - 1 {
        for k in j + 2..n - 1 {
            for (ej, ek) in [(false, false), (false, true), (true, false), (true, true)] {
                let (a, b) = (Twist { index: j, inverse: ej }, Twist { index: k, inverse: ek });
                pairs.push((TwistWord(vec![a, b]), TwistWord(vec![b, a])));
            }
        }
    }
    for k in 0..n - 1 {
        pairs.push((TwistWord(vec![Twist::pos(k), Twist::neg(k)]), TwistWord::identity()));
    }
    pairs
}

/// Checks every relation on every enumerated arc; returns the number of arcs.
pub fn check_braid_relations(n: usize, max_len: usize) -> Result<usize, String> {
    let arcs = all_arcdata(n, max_len);
    let pairs = relation_pairs(n);
    for d in &arcs {
        for (l, r) in &pairs {
            let (x, y) = (d.apply(l).map_err(|e| e.to_string())?, d.apply(r).map_err(|e| e.to_string())?);
            if x != y {
                return Err(format!("{l} vs {r} on {d}"));
            }
        }
    }
    Ok(arcs.len())
}

// Piecewise-linear half-twist model at four punctures: the disk of radius R0
// about the midpoint of z_k, z_{k+1} turns rigidly by π, the annulus out to
// R1 interpolates linearly in the radius, and everything else is fixed.

const SPACING: f64 = 0.4;
const R0: f64 = 0.6 * SPACING;
const R1: f64 = 0.9 * SPACING;

pub fn toy_disk() -> MarkedDisk {
    MarkedDisk::new((0..4).map(|k| [-0.6 + SPACING * k as f64, 0.0]).collect()).unwrap()
}

pub fn pl_twist(t: Twist, p: [f64; 2]) -> [f64; 2] {
    let c = [-0.6 + SPACING * (t.index as f64 + 0.5), 0.0];
    let (dx, dy) = (p[0] - c[0], p[1] - c[1]);
    let r = dx.hypot(dy);
    let mut theta = if r <= R0 {
        std::f64::consts::PI
    } else if r < R1 {
        std::f64::consts::PI * (R1 - r) / (R1 - R0)
    } else {
        return p;
    };
    if t.inverse {
        theta = -theta;
    }
    let (s, co) = theta.sin_cos();
    [c[0] + co * dx - s * dy, c[1] + s * dx + co * dy]
}

pub fn pl_apply(t: Twist, arc: &Arc, disk: &MarkedDisk) -> Arc {
    const H: f64 = 2e-3;
    let mut out = vec![pl_twist(t, arc.points[0])];
    for w in arc.points.windows(2) {
        let mut stack = vec![w[1]];
        let mut cur = w[0];
        while let Some(&p) = stack.last() {
            let (a, b) = (pl_twist(t, cur), pl_twist(t, p));
            let pre = (p[0] - cur[0]).hypot(p[1] - cur[1]);
            if pre <= H && (a[0] - b[0]).hypot(a[1] - b[1]) <= H {
                out.push(b);
                cur = p;
                stack.pop();
            } else {
                stack.push([0.5 * (cur[0] + p[0]), 0.5 * (cur[1] + p[1])]);
            }
        }
    }
    let swap = |k: usize| if k == t.index { k + 1 } else if k == t.index + 1 { t.index } else { k };
    let (start, end) = (swap(arc.start), swap(arc.end));
    let n = out.len();
    out[0] = disk.point(start);
    out[n - 1] = disk.point(end);
    Arc { start, end, points: out }
}

/// Polyline staying at least `gap` away from every puncture other than at
/// its own endpoints.
pub fn clear_of_punctures(arc: &Arc, disk: &MarkedDisk, gap: f64) -> bool {
    let m = arc.points.len() - 1;
    arc.points.windows(2).enumerate().all(|(s, w)| {
        (0..disk.len()).all(|k| {
            let own = (s == 0 && k == arc.start) || (s + 1 == m && k == arc.end);
            own || segment_distance(disk.point(k), w[0], w[1]) >= gap
        })
    })
}

pub type GeometricCase = (usize, usize, Vec<[f64; 2]>, Vec<(usize, bool)>);

/// Random polyline arc between two punctures and a random word of length ≤ 4.
pub fn arb_case() -> impl Strategy<Value = GeometricCase> {
    (
        0usize..4,
        1usize..4,
        prop::collection::vec((-0.95f64..0.95, -0.5f64..0.5).prop_map(|(x, y)| [x, y]), 1..5),
        prop::collection::vec((0usize..3, any::<bool>()), 1..=4),
    )
        .prop_map(|(a, off, mid, w)| (a, (a + off) % 4, mid, w))
}

/// The PL image of the arc has the arc-data the combinatorial action predicts.
pub fn geometric_agreement((a, b, mid, w): GeometricCase) -> Result<(), TestCaseError> {
    let disk = toy_disk();
    let mut points = vec![disk.point(a)];
    points.extend(mid);
    points.push(disk.point(b));
    let arc = Arc { start: a, end: b, points };
    prop_assume!(clear_of_punctures(&arc, &disk, 0.02));
    let word = TwistWord(w.iter().map(|&(k, inverse)| Twist { index: k, inverse }).collect());
    let before = extract_arc_data(&arc, &disk);
    prop_assume!(before.is_ok());
    let mut img = arc.clone();
    for t in word.tokens().iter().rev() {
        img = pl_apply(*t, &img, &disk);
    }
    let geometric = extract_arc_data(&img, &disk);
    prop_assume!(geometric.is_ok());
    let combinatorial = before.unwrap().apply(&word).unwrap();
    prop_assert_eq!(geometric.unwrap(), combinatorial, "word {}", word);
    Ok(())
}
