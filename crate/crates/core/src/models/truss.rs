//! Six-member planar truss, statically indeterminate to the first degree,
//! analysed by the direct stiffness method.
//!
//! Joints: A (0, 0) pinned, B (b, 0) on a roller (vertical reaction),
//! C (b, h) loaded, D (0, h), with b = 2 m and h = 2√3 m.
//! Members: 1 = AD, 2 = BD, 3 = DC, 4 = BC, 5 = AC, 6 = AB.
//! Member 5 is a compression diagonal; once its axial force exceeds the
//! Euler load it is dropped and the remaining determinate truss is solved.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::adapt::Model;
use crate::error::{Error, Result};

pub const WIDTH: f64 = 2.0;
pub const HEIGHT: f64 = 2.0 * 1.732_050_807_568_877_2;

/// Joint coordinates A, B, C, D.
pub const JOINTS: [(f64, f64); 4] = [(0.0, 0.0), (WIDTH, 0.0), (WIDTH, HEIGHT), (0.0, HEIGHT)];

/// Member end joints, in member order 1..6.
pub const MEMBERS: [(usize, usize); 6] = [(0, 3), (1, 3), (3, 2), (1, 2), (0, 2), (0, 1)];

/// Global degrees of freedom left free by the supports: B x, C x/y, D x/y.
const FREE_DOFS: [usize; 5] = [2, 4, 5, 6, 7];

pub fn member_length(m: usize) -> f64 {
    let (i, j) = MEMBERS[m];
    let (dx, dy) = (JOINTS[j].0 - JOINTS[i].0, JOINTS[j].1 - JOINTS[i].1);
    dx.hypot(dy)
}

/// Which member areas are random.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrussCase {
    /// Diagonals 2 and 5, each U(3, 9) cm².
    TwoDiagonals,
    /// Members 1 and 3 U(5.5, 6.5) cm², member 5 U(3, 9) cm².
    ThreeMembers,
}

impl TrussCase {
    /// Zero-based member indices and their area bounds (m²).
    pub fn random_members(self) -> Vec<(usize, f64, f64)> {
        match self {
            TrussCase::TwoDiagonals => vec![(1, 3e-4, 9e-4), (4, 3e-4, 9e-4)],
            TrussCase::ThreeMembers => vec![(0, 5.5e-4, 6.5e-4), (2, 5.5e-4, 6.5e-4), (4, 3e-4, 9e-4)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrussSpec {
    /// Young's modulus (Pa).
    pub e: f64,
    /// Nominal areas (m²) for members 1..6.
    pub areas: [f64; 6],
    /// Load parameter P (N): C carries P leftward and √3 P downward.
    pub p: f64,
    /// Drop member 5 once it buckles.
    pub buckling: bool,
    pub case: TrussCase,
}

impl TrussSpec {
    pub fn new(case: TrussCase) -> Self {
        Self {
            e: 200e9,
            areas: [6e-4; 6],
            p: DEFAULT_LOAD,
            buckling: true,
            case,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e > 0.0) || self.areas.iter().any(|a| !(*a > 0.0)) || !self.p.is_finite() {
            return Err(Error::InvalidConfig(
                "truss modulus and areas must be positive, load finite".into(),
            ));
        }
        Ok(())
    }

    /// Euler load of member 5 with a solid circular section, `I = A² / 4π`.
    pub fn critical_load(&self, a5: f64) -> f64 {
        let inertia = a5 * a5 / (4.0 * std::f64::consts::PI);
        std::f64::consts::PI.powi(2) * self.e * inertia / member_length(4).powi(2)
    }

    /// Areas for a point of the unit cube.
    pub fn areas_at(&self, x: &[f64]) -> Result<[f64; 6]> {
        let random = self.case.random_members();
        if x.len() != random.len() {
            return Err(Error::DimensionMismatch {
                expected: random.len(),
                found: x.len(),
            });
        }
        let mut areas = self.areas;
        for (&(m, lo, hi), &t) in random.iter().zip(x) {
            areas[m] = lo + (hi - lo) * t;
        }
        Ok(areas)
    }

    /// Applied joint loads, length 8 (x, y per joint).
    pub fn loads(&self) -> [f64; 8] {
        let mut f = [0.0; 8];
        f[4] = -self.p;
        f[5] = -3f64.sqrt() * self.p;
        f
    }

    /// Stiffness solution with the given members present.
    pub fn solve_members(&self, areas: &[f64; 6], present: [bool; 6]) -> Result<TrussSolution> {
        let mut k = DMatrix::<f64>::zeros(8, 8);
        for (m, &(i, j)) in MEMBERS.iter().enumerate() {
            if !present[m] {
                continue;
            }
            let (c, s) = direction(m);
            let stiff = self.e * areas[m] / member_length(m);
            let local = [c * c, c * s, s * s];
            let dofs = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1];
            let block = |a: usize, b: usize| match (a % 2, b % 2) {
                (0, 0) => local[0],
                (1, 1) => local[2],
                _ => local[1],
            };
            for a in 0..4 {
                for b in 0..4 {
                    let sign = if (a < 2) == (b < 2) { 1.0 } else { -1.0 };
                    k[(dofs[a], dofs[b])] += sign * stiff * block(a, b);
                }
            }
        }
        let loads = self.loads();
        let kff = DMatrix::from_fn(5, 5, |r, c| k[(FREE_DOFS[r], FREE_DOFS[c])]);
        let ff = DVector::from_fn(5, |r, _| loads[FREE_DOFS[r]]);
        let uf = kff
            .lu()
            .solve(&ff)
            .ok_or_else(|| Error::SingularSystem("truss stiffness matrix is singular".into()))?;
        let mut u = [0.0; 8];
        for (r, &d) in FREE_DOFS.iter().enumerate() {
            u[d] = uf[r];
        }
        let mut forces = [0.0; 6];
        for (m, &(i, j)) in MEMBERS.iter().enumerate() {
            if present[m] {
                let (c, s) = direction(m);
                let stretch = c * (u[2 * j] - u[2 * i]) + s * (u[2 * j + 1] - u[2 * i + 1]);
                forces[m] = self.e * areas[m] / member_length(m) * stretch;
            }
        }
        Ok(TrussSolution {
            displacements: u,
            forces,
            member5_failed: !present[4],
        })
    }

    /// Full analysis including the buckling check on member 5.
    pub fn solve(&self, areas: &[f64; 6]) -> Result<TrussSolution> {
        let intact = self.solve_members(areas, [true; 6])?;
        if self.buckling && -intact.forces[4] > self.critical_load(areas[4]) {
            let mut present = [true; 6];
            present[4] = false;
            return self.solve_members(areas, present);
        }
        Ok(intact)
    }

    /// Axial force in member 4 (N, tension positive).
    pub fn member4_force(&self, areas: &[f64; 6]) -> Result<f64> {
        Ok(self.solve(areas)?.forces[3])
    }
}

/// Load parameter P (N) placing the member-5 buckling boundary inside the
/// sampled area range.
pub const DEFAULT_LOAD: f64 = 2_500.0;

fn direction(m: usize) -> (f64, f64) {
    let (i, j) = MEMBERS[m];
    let l = member_length(m);
    ((JOINTS[j].0 - JOINTS[i].0) / l, (JOINTS[j].1 - JOINTS[i].1) / l)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrussSolution {
    /// Joint displacements (x, y per joint).
    pub displacements: [f64; 8],
    /// Member axial forces (N, tension positive).
    pub forces: [f64; 6],
    pub member5_failed: bool,
}

#[derive(Debug, Clone)]
pub struct TrussModel {
    pub spec: TrussSpec,
}

impl Model for TrussModel {
    fn dimension(&self) -> usize {
        self.spec.case.random_members().len()
    }

    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.spec.member4_force(&self.spec.areas_at(x)?)
    }
}
