//! Generators for the classic families of non-isometric clouds that share
//! simpler invariants, plus two weighted 9-point trees with equal local
//! distributions of distances.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::mmspace::WeightedSpace;
use crate::{Cloud, Error, Result};

/// The known families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorpusName {
    /// Trapezium and kite with equal pairwise distances.
    Tk,
    /// 3-4-5 triangle and a unit square.
    TriSq,
    /// 5-point sets with equal PDDs.
    S5,
    /// 7-point sets with equal PDDs.
    Q7,
    /// 6-point sets with equal simplified SDDs of order 2.
    T6,
    /// Weighted 9-point trees with equal local distributions.
    Trees9,
}

impl CorpusName {
    pub const ALL: [CorpusName; 6] = [Self::Tk, Self::TriSq, Self::S5, Self::Q7, Self::T6, Self::Trees9];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Tk => "TK",
            Self::TriSq => "TRI_SQ",
            Self::S5 => "S5",
            Self::Q7 => "Q7",
            Self::T6 => "T6",
            Self::Trees9 => "TREES9",
        }
    }
}

impl fmt::Display for CorpusName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CorpusName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown corpus name {s:?}")))
    }
}

/// A named cloud produced by [`generate`].
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub cloud: Cloud,
}

/// Sign of a `y` coordinate in the 6-point construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn apply(self, x: f64) -> f64 {
        match self {
            Self::Plus => x,
            Self::Minus => -x,
        }
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Self::Plus),
            "-" | "minus" => Ok(Self::Minus),
            _ => Err(Error::InvalidParameter(format!("sign must be + or -, got {s:?}"))),
        }
    }
}

/// Parameters of the 6-point sets: half-lengths `l` with `|RC_1| = |GC_2|`
/// determined by `l[2]`, `|RC_2| = |GC_3|` by `l[0]`, `|RC_3| = |GC_1|` by
/// `l[1]`, and the signs of the `y` coordinates of `C_1, C_2, C_3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct T6Params {
    pub l: [f64; 3],
    pub signs: [Sign; 3],
}

impl Default for T6Params {
    /// `C_1 = (-1,2,0)`, `C_2 = (1,-2,0)`, `C_3 = (0,3,0)`.
    fn default() -> Self {
        let long = 13f64.sqrt() / 2.0;
        Self {
            l: [long, long, 5f64.sqrt() / 2.0],
            signs: [Sign::Plus, Sign::Minus, Sign::Plus],
        }
    }
}

impl T6Params {
    /// The branch where `C_1` and `C_2` mirror each other across the
    /// `y`-axis, which makes the two sets isometric.
    pub fn mirrored() -> Self {
        Self {
            signs: [Sign::Plus; 3],
            ..Self::default()
        }
    }

    /// Coordinates of `C_1, C_2, C_3` in the plane `z = 0`.
    pub fn c_points(&self) -> Result<[[f64; 3]; 3]> {
        let [l1, l2, l3] = self.l.map(|l| l * l);
        if self.l.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(Error::InvalidParameter("lengths must be positive".into()));
        }
        let x = [(l3 - l2) / 2.0, (l1 - l3) / 2.0, (l2 - l1) / 2.0];
        let radius_sq = [4.0 * l3, 4.0 * l1, 4.0 * l2];
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            let y_sq = radius_sq[i] - (x[i] + 2.0).powi(2);
            if y_sq < -1e-12 * radius_sq[i] {
                return Err(Error::InvalidParameter(format!(
                    "lengths give y{}^2 = {y_sq} < 0",
                    i + 1
                )));
            }
            out[i] = [x[i], self.signs[i].apply(y_sq.max(0.0).sqrt()), 0.0];
        }
        Ok(out)
    }
}

fn coords(points: &[[f64; 3]]) -> Cloud {
    let pts: Vec<Vec<f64>> = points.iter().map(|p| p.to_vec()).collect();
    Cloud::from_coordinates(&pts, None).expect("corpus points are valid")
}

fn planar(points: &[[f64; 2]]) -> Cloud {
    let pts: Vec<Vec<f64>> = points.iter().map(|p| p.to_vec()).collect();
    Cloud::from_coordinates(&pts, None).expect("corpus points are valid")
}

/// `T = {(1,1), (-1,1), (-2,0), (2,0)}`.
pub fn trapezium() -> Cloud {
    planar(&[[1.0, 1.0], [-1.0, 1.0], [-2.0, 0.0], [2.0, 0.0]])
}

/// `K = {(0,1), (-1,0), (0,-1), (3,0)}`.
pub fn kite() -> Cloud {
    planar(&[[0.0, 1.0], [-1.0, 0.0], [0.0, -1.0], [3.0, 0.0]])
}

pub fn triangle() -> Cloud {
    planar(&[[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]])
}

pub fn square() -> Cloud {
    planar(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
}

const R_MINUS: [f64; 3] = [-2.0, 0.0, -2.0];
const R_PLUS: [f64; 3] = [2.0, 0.0, 2.0];
const G_MINUS: [f64; 3] = [-1.0, -1.0, 0.0];
const G_PLUS: [f64; 3] = [1.0, 1.0, 0.0];
const O_MINUS: [f64; 3] = [0.0, 0.0, -1.0];
const O_PLUS: [f64; 3] = [0.0, 0.0, 1.0];

/// `(S_-, S_+)`: points `R_-, R_+, G_-, G_+` and `B_∓ = (0, 1, ∓1)`.
pub fn five_point_sets() -> (Cloud, Cloud) {
    let base = [R_MINUS, R_PLUS, G_MINUS, G_PLUS];
    let with = |b: [f64; 3]| {
        let mut pts = base.to_vec();
        pts.push(b);
        coords(&pts)
    };
    (with([0.0, 1.0, -1.0]), with([0.0, 1.0, 1.0]))
}

/// `(Q_-, Q_+)`: `R, G, B_-1, B_+1, B_-2, B_+2` and `O_∓ = (0, 0, ∓1)`.
pub fn seven_point_sets() -> (Cloud, Cloud) {
    let base = [R_MINUS, R_PLUS, G_MINUS, G_PLUS, [-1.0, 2.0, 0.0], [1.0, 2.0, 0.0]];
    let with = |o: [f64; 3]| {
        let mut pts = base.to_vec();
        pts.push(o);
        coords(&pts)
    };
    (with(O_MINUS), with(O_PLUS))
}

/// `(T_-, T_+)`: `R, G, C_1, C_2, C_3` and `O_∓ = (0, 0, ∓1)`.
pub fn six_point_sets(params: &T6Params) -> Result<(Cloud, Cloud)> {
    let [c1, c2, c3] = params.c_points()?;
    let with = |o: [f64; 3]| coords(&[R_MINUS, R_PLUS, c1, c2, c3, o]);
    Ok((with(O_MINUS), with(O_PLUS)))
}

/// Tree weights in units of `1/420`, by point index.
const TREE_WEIGHTS_420: [i64; 9] = [69, 4, 67, 56, 28, 56, 80, 15, 45];

/// Branches of three points in the first tree.
pub const TREE_X_BRANCHES: [[usize; 3]; 3] = [[0, 1, 2], [3, 4, 5], [6, 7, 8]];

/// Branches of three points in the second tree.
pub const TREE_Y_BRANCHES: [[usize; 3]; 3] = [[0, 3, 7], [1, 6, 5], [8, 4, 2]];

/// Exact point weights shared by both trees; they sum to 1 and every branch
/// sums to 1/3.
pub fn tree_weights() -> [Ratio<i64>; 9] {
    TREE_WEIGHTS_420.map(|w| Ratio::new(w, 420))
}

/// Distance 1 between points of one branch, 2 across branches.
pub fn tree_matrix(branches: &[[usize; 3]; 3]) -> Vec<Vec<f64>> {
    let mut branch_of = [0usize; 9];
    for (b, members) in branches.iter().enumerate() {
        for &p in members {
            branch_of[p] = b;
        }
    }
    (0..9)
        .map(|i| {
            (0..9)
                .map(|j| match (i == j, branch_of[i] == branch_of[j]) {
                    (true, _) => 0.0,
                    (false, true) => 1.0,
                    (false, false) => 2.0,
                })
                .collect()
        })
        .collect()
}

/// The two 9-point weighted trees `(X, Y)`.
pub fn trees() -> (WeightedSpace, WeightedSpace) {
    let weights: Vec<f64> = TREE_WEIGHTS_420.iter().map(|&w| w as f64 / 420.0).collect();
    let build = |branches| {
        WeightedSpace::from_matrix(&tree_matrix(branches), &weights).expect("tree spaces are valid")
    };
    (build(&TREE_X_BRANCHES), build(&TREE_Y_BRANCHES))
}

/// All clouds of a family with their file stems.
pub fn generate(name: CorpusName, t6: &T6Params) -> Result<Vec<CorpusEntry>> {
    let entry = |name: &str, cloud: Cloud| CorpusEntry {
        name: name.to_string(),
        cloud,
    };
    Ok(match name {
        CorpusName::Tk => vec![entry("T", trapezium()), entry("K", kite())],
        CorpusName::TriSq => vec![entry("triangle", triangle()), entry("square", square())],
        CorpusName::S5 => {
            let (minus, plus) = five_point_sets();
            vec![entry("S_minus", minus), entry("S_plus", plus)]
        }
        CorpusName::Q7 => {
            let (minus, plus) = seven_point_sets();
            vec![entry("Q_minus", minus), entry("Q_plus", plus)]
        }
        CorpusName::T6 => {
            let (minus, plus) = six_point_sets(t6)?;
            vec![entry("T_minus", minus), entry("T_plus", plus)]
        }
        CorpusName::Trees9 => {
            let (x, y) = trees();
            vec![entry("X", x.cloud().clone()), entry("Y", y.cloud().clone())]
        }
    })
}
