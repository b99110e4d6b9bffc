//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

/// Number of new 1-D points introduced at per-dimension level `l`.
fn new_points(l: u32) -> usize {
    match l {
        1 => 1,
        2 => 2,
        l => 1 << (l - 2),
    }
}

/// Point count of the conventional sparse grid with level sum ≤ `q`,
/// by enumerating every multi-index.
pub fn smolyak_count(d: usize, q: u32) -> usize {
    fn rec(d: usize, budget: u32) -> usize {
        if d == 0 {
            return 1;
        }
        (1..=budget.saturating_sub(d as u32 - 1))
            .map(|l| new_points(l) * rec(d - 1, budget - l))
            .sum()
    }
    rec(d, q)
}

/// Points of the 1-D grid up to level `l`, ascending.
pub fn points_1d(l: u32) -> Vec<f64> {
    if l == 1 {
        return vec![0.5];
    }
    let n = 1usize << (l - 1);
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

/// Piecewise-linear interpolant of `f` on a uniform grid with spacing `h`.
pub fn pl_interp(f: impl Fn(f64) -> f64, h: f64, x: f64) -> f64 {
    let i = ((x / h).floor() as i64).clamp(0, (1.0 / h).round() as i64 - 1) as f64;
    let (a, b) = (i * h, (i + 1.0) * h);
    let t = (x - a) / h;
    f(a) * (1.0 - t) + f(b) * t
}

// Truss oracle: force (flexibility) method with member 5 as the redundant,
// primary structures solved by joint equilibrium.

const S3: f64 = 1.732_050_807_568_877_2;
pub const JOINTS: [(f64, f64); 4] = [(0.0, 0.0), (2.0, 0.0), (2.0, 2.0 * S3), (0.0, 2.0 * S3)];
pub const MEMBERS: [(usize, usize); 6] = [(0, 3), (1, 3), (3, 2), (1, 2), (0, 2), (0, 1)];

fn unit(m: usize, from: usize) -> (f64, f64) {
    let (i, j) = MEMBERS[m];
    let other = if from == i { j } else { i };
    let (dx, dy) = (
        JOINTS[other].0 - JOINTS[from].0,
        JOINTS[other].1 - JOINTS[from].1,
    );
    let l = dx.hypot(dy);
    (dx / l, dy / l)
}

pub fn length(m: usize) -> f64 {
    let (i, j) = MEMBERS[m];
    (JOINTS[j].0 - JOINTS[i].0).hypot(JOINTS[j].1 - JOINTS[i].1)
}

/// Member forces of the truss without member 5 under joint loads `f`
/// (x, y per joint), from the 8 joint-equilibrium equations. Unknowns are
/// the five remaining member forces and reactions A_x, A_y, B_y.
pub fn determinate_forces(f: &[f64; 8]) -> [f64; 6] {
    let members = [0usize, 1, 2, 3, 5];
    let mut a = DMatrix::<f64>::zeros(8, 8);
    for (col, &m) in members.iter().enumerate() {
        let (i, j) = MEMBERS[m];
        for joint in [i, j] {
            let (ux, uy) = unit(m, joint);
            a[(2 * joint, col)] += ux;
            a[(2 * joint + 1, col)] += uy;
        }
    }
    a[(0, 5)] = 1.0;
    a[(1, 6)] = 1.0;
    a[(3, 7)] = 1.0;
    let b = DVector::from_iterator(8, f.iter().map(|v| -v));
    let x = a.lu().solve(&b).expect("determinate truss is stable");
    let mut forces = [0.0; 6];
    for (col, &m) in members.iter().enumerate() {
        forces[m] = x[col];
    }
    forces
}

/// Loads at C: P leftward, √3 P downward.
pub fn loads(p: f64) -> [f64; 8] {
    let mut f = [0.0; 8];
    f[4] = -p;
    f[5] = -S3 * p;
    f
}

/// Indeterminate member forces by the force method.
pub fn force_method(areas: &[f64; 6], e: f64, p: f64) -> [f64; 6] {
    let n0 = determinate_forces(&loads(p));
    // unit tension in member 5 acts on A toward C and on C toward A
    let mut unit_pair = [0.0; 8];
    let (ax, ay) = unit(4, 0);
    let (cx, cy) = unit(4, 2);
    unit_pair[0] = ax;
    unit_pair[1] = ay;
    unit_pair[4] = cx;
    unit_pair[5] = cy;
    let mut n1 = determinate_forces(&unit_pair);
    n1[4] = 1.0;
    let flex = |m: usize| length(m) / (e * areas[m]);
    let d10: f64 = (0..6).map(|m| n0[m] * n1[m] * flex(m)).sum();
    let d11: f64 = (0..6).map(|m| n1[m] * n1[m] * flex(m)).sum();
    let x = -d10 / d11;
    let mut out = [0.0; 6];
    for m in 0..6 {
        out[m] = n0[m] + x * n1[m];
    }
    out
}

/// Largest joint-equilibrium residual at the free degrees of freedom.
pub fn equilibrium_residual(forces: &[f64; 6], p: f64) -> f64 {
    let f = loads(p);
    let mut r = f;
    for (m, &(i, j)) in MEMBERS.iter().enumerate() {
        for joint in [i, j] {
            let (ux, uy) = unit(m, joint);
            r[2 * joint] += forces[m] * ux;
            r[2 * joint + 1] += forces[m] * uy;
        }
    }
    [2usize, 4, 5, 6, 7]
        .iter()
        .map(|&k| r[k].abs())
        .fold(0.0, f64::max)
}
