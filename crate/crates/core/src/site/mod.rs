//! Presheaves of forms over a finite poset of open sets.
//!
//! Opens are finite unions of open rational boxes (or all of `ℝ^n`). Every
//! open carries the forms complex of one shared polynomial ring and the
//! restriction maps are the identity on expressions: a polynomial vanishing
//! on a nonempty box vanishes identically, so nothing is lost.

mod glue;
mod presheaf;

pub use glue::{
    bump_locality_demo, glue_derivations, locality_witness, partition_glue_demo, sample_points,
};
pub use presheaf::{
    check_restriction_squares, presheaf_cartan_verify, LocalDerivationFamily, PresheafCDGA,
    PresheafReport, SquareReport, SquareWitness,
};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expr::Rational;

pub const MAX_OPENS: usize = 32;

/// An open interval; `None` ends are infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
}

impl Interval {
    pub fn new(lo: Option<Rational>, hi: Option<Rational>) -> Self {
        Interval { lo, hi }
    }

    pub fn bounded(lo: Rational, hi: Rational) -> Self {
        Interval::new(Some(lo), Some(hi))
    }

    pub fn line() -> Self {
        Interval::new(None, None)
    }

    pub fn is_empty(&self) -> bool {
        matches!((&self.lo, &self.hi), (Some(a), Some(b)) if a >= b)
    }

    fn contains(&self, other: &Interval) -> bool {
        let lo_ok = match (&self.lo, &other.lo) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a <= b,
        };
        let hi_ok = match (&self.hi, &other.hi) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => b <= a,
        };
        lo_ok && hi_ok
    }

    fn intersect(&self, other: &Interval) -> Interval {
        let lo = match (&self.lo, &other.lo) {
            (None, x) | (x, None) => x.clone(),
            (Some(a), Some(b)) => Some(a.max(b).clone()),
        };
        let hi = match (&self.hi, &other.hi) {
            (None, x) | (x, None) => x.clone(),
            (Some(a), Some(b)) => Some(a.min(b).clone()),
        };
        Interval { lo, hi }
    }

    /// Finite window used for sampling: unbounded sides extend two units.
    pub(crate) fn window(&self) -> (Rational, Rational) {
        let two = Rational::from_integer(2.into());
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) => (a.clone(), b.clone()),
            (Some(a), None) => (a.clone(), a + &two),
            (None, Some(b)) => (b - &two, b.clone()),
            (None, None) => (-Rational::from_integer(1.into()), Rational::from_integer(1.into())),
        }
    }
}

/// A product of open intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenBox(pub Vec<Interval>);

impl OpenBox {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().any(Interval::is_empty)
    }

    pub fn contains(&self, other: &OpenBox) -> bool {
        other.is_empty() || self.0.iter().zip(&other.0).all(|(a, b)| a.contains(b))
    }

    pub fn intersect(&self, other: &OpenBox) -> OpenBox {
        OpenBox(self.0.iter().zip(&other.0).map(|(a, b)| a.intersect(b)).collect())
    }

    pub fn center(&self) -> Vec<Rational> {
        let half = Rational::new(1.into(), 2.into());
        self.0
            .iter()
            .map(|i| {
                let (a, b) = i.window();
                (a + b) * &half
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    All,
    Boxes(Vec<OpenBox>),
}

impl Region {
    pub fn is_empty(&self) -> bool {
        match self {
            Region::All => false,
            Region::Boxes(bs) => bs.iter().all(OpenBox::is_empty),
        }
    }

    /// Sufficient check: each box lies inside a single box of `self`.
    pub fn contains(&self, other: &Region) -> bool {
        match (self, other) {
            (Region::All, _) => true,
            (Region::Boxes(_), Region::All) => false,
            (Region::Boxes(outer), Region::Boxes(inner)) => inner
                .iter()
                .all(|b| b.is_empty() || outer.iter().any(|o| o.contains(b))),
        }
    }

    pub fn intersect(&self, other: &Region) -> Region {
        match (self, other) {
            (Region::All, r) | (r, Region::All) => r.clone(),
            (Region::Boxes(a), Region::Boxes(b)) => Region::Boxes(
                a.iter()
                    .flat_map(|x| b.iter().map(move |y| x.intersect(y)))
                    .filter(|x| !x.is_empty())
                    .collect(),
            ),
        }
    }

    /// Nonempty boxes, with `All` as the unbounded box in dimension `n`.
    pub fn boxes(&self, n: usize) -> Vec<OpenBox> {
        match self {
            Region::All => vec![OpenBox(vec![Interval::line(); n])],
            Region::Boxes(bs) => bs.iter().filter(|b| !b.is_empty()).cloned().collect(),
        }
    }

    fn dims(&self) -> Vec<usize> {
        match self {
            Region::All => Vec::new(),
            Region::Boxes(bs) => bs.iter().map(OpenBox::dim).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Open {
    pub name: String,
    pub region: Region,
}

impl Open {
    pub fn new(name: impl Into<String>, region: Region) -> Self {
        Open {
            name: name.into(),
            region,
        }
    }
}

/// A finite poset of opens under inclusion, stored as the reflexive and
/// transitive closure of the declared relation.
#[derive(Clone, Debug, PartialEq)]
pub struct OpenPoset {
    opens: Vec<Open>,
    leq: Vec<Vec<bool>>,
    top: usize,
    dim: Option<usize>,
}

impl OpenPoset {
    /// `relations` lists pairs `(smaller, larger)` by name.
    pub fn new(opens: Vec<Open>, relations: &[(String, String)]) -> Result<OpenPoset> {
        let n = opens.len();
        if n == 0 {
            return Err(Error::InvalidPoset("no opens".into()));
        }
        if n > MAX_OPENS {
            return Err(Error::InvalidPoset(format!(
                "{n} opens exceeds the limit of {MAX_OPENS}"
            )));
        }
        for (i, o) in opens.iter().enumerate() {
            if opens[..i].iter().any(|p| p.name == o.name) {
                return Err(Error::InvalidPoset(format!("duplicate open {}", o.name)));
            }
        }
        let mut dims: Vec<usize> = opens.iter().flat_map(|o| o.region.dims()).collect();
        dims.sort_unstable();
        dims.dedup();
        if dims.len() > 1 {
            return Err(Error::InvalidPoset("boxes of different dimensions".into()));
        }
        let dim = dims.first().copied();

        let index = |name: &str| {
            opens
                .iter()
                .position(|o| o.name == name)
                .ok_or_else(|| Error::InvalidPoset(format!("unknown open {name}")))
        };
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in relations {
            leq[index(a)?][index(b)?] = true;
        }
        for k in 0..n {
            let through = leq[k].clone();
            for row in leq.iter_mut().filter(|row| row[k]) {
                for (cell, &t) in row.iter_mut().zip(&through) {
                    *cell |= t;
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::InvalidPoset(format!(
                        "{} and {} are mutually included",
                        opens[i].name, opens[j].name
                    )));
                }
            }
        }
        let top = (0..n)
            .find(|&t| (0..n).all(|i| leq[i][t]))
            .ok_or_else(|| Error::InvalidPoset("no top element".into()))?;
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && !opens[j].region.contains(&opens[i].region) {
                    return Err(Error::InvalidPoset(format!(
                        "region of {} is not inside {}",
                        opens[i].name, opens[j].name
                    )));
                }
            }
        }
        Ok(OpenPoset {
            opens,
            leq,
            top,
            dim,
        })
    }

    /// The one-open poset `{M}` with `M = ℝ^n`.
    pub fn single() -> OpenPoset {
        OpenPoset::new(vec![Open::new("M", Region::All)], &[]).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opens.is_empty()
    }

    pub fn opens(&self) -> &[Open] {
        &self.opens
    }

    pub fn open(&self, i: usize) -> &Open {
        &self.opens[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.opens.iter().position(|o| o.name == name)
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Dimension of the boxes, if any open is given by boxes.
    pub fn box_dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    /// Strict pairs `(lower, upper)` in index order.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|u| (0..n).map(move |v| (v, u)))
            .filter(|&(v, u)| v != u && self.leq[v][u])
            .collect()
    }
}

fn halton(mut index: u64, base: u64) -> Rational {
    let mut f = Rational::new(1.into(), 1.into());
    let mut r = Rational::zero();
    let b = Rational::from_integer(base.into());
    while index > 0 {
        f /= &b;
        r += &f * Rational::from_integer((index % base).into());
        index /= base;
    }
    r
}

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Rational points in the box: its center first, then a Halton sequence.
pub(crate) fn box_points(b: &OpenBox, count: usize) -> Vec<Vec<Rational>> {
    let windows: Vec<(Rational, Rational)> = b.0.iter().map(Interval::window).collect();
    let mut out = vec![b.center()];
    let mut k = 1u64;
    while out.len() < count {
        out.push(
            windows
                .iter()
                .enumerate()
                .map(|(i, (a, c))| {
                    let t = halton(k, PRIMES[i % PRIMES.len()] + (i / PRIMES.len()) as u64 * 41);
                    a + (c - a) * t
                })
                .collect(),
        );
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rat;

    fn iv(a: i64, b: i64) -> Interval {
        Interval::bounded(rat(a, 1), rat(b, 1))
    }
    fn region(bs: Vec<Vec<Interval>>) -> Region {
        Region::Boxes(bs.into_iter().map(OpenBox).collect())
    }
    fn rel(a: &str, b: &str) -> (String, String) {
        (a.into(), b.into())
    }

    #[test]
    fn intervals() {
        assert!(iv(0, 2).contains(&iv(0, 1)));
        assert!(!iv(0, 1).contains(&iv(0, 2)));
        assert!(Interval::line().contains(&iv(-5, 5)));
        assert!(!iv(0, 1).contains(&Interval::new(Some(rat(0, 1)), None)));
        assert_eq!(iv(0, 2).intersect(&iv(1, 3)), iv(1, 2));
        assert!(iv(0, 1).intersect(&iv(1, 2)).is_empty());
    }

    #[test]
    fn poset_closure_and_top() {
        let opens = vec![
            Open::new("M", Region::All),
            Open::new("U", region(vec![vec![iv(-2, 2)]])),
            Open::new("V", region(vec![vec![iv(-1, 1)]])),
        ];
        let p = OpenPoset::new(opens, &[rel("U", "M"), rel("V", "U")]).unwrap();
        assert_eq!(p.top(), 0);
        assert!(p.leq(2, 0));
        assert_eq!(p.strict_pairs().len(), 3);
    }

    #[test]
    fn poset_rejections() {
        let cyc = vec![
            Open::new("A", region(vec![vec![iv(0, 1)]])),
            Open::new("B", region(vec![vec![iv(0, 1)]])),
        ];
        assert!(matches!(
            OpenPoset::new(cyc, &[rel("A", "B"), rel("B", "A")]),
            Err(Error::InvalidPoset(_))
        ));
        let no_top = vec![
            Open::new("A", region(vec![vec![iv(0, 1)]])),
            Open::new("B", region(vec![vec![iv(2, 3)]])),
        ];
        assert!(OpenPoset::new(no_top, &[]).is_err());
        let bad_region = vec![
            Open::new("A", region(vec![vec![iv(0, 1)]])),
            Open::new("B", region(vec![vec![iv(0, 5)]])),
        ];
        assert!(OpenPoset::new(bad_region, &[rel("B", "A")]).is_err());
        let many: Vec<Open> = (0..33).map(|i| Open::new(format!("U{i}"), Region::All)).collect();
        assert!(OpenPoset::new(many, &[]).is_err());
    }

    #[test]
    fn sample_points_start_at_center() {
        let b = OpenBox(vec![iv(-1, 1), iv(0, 4)]);
        let pts = box_points(&b, 25);
        assert_eq!(pts.len(), 25);
        assert_eq!(pts[0], vec![rat(0, 1), rat(2, 1)]);
        for p in &pts {
            assert!(p[0] > rat(-1, 1) && p[0] < rat(1, 1));
            assert!(p[1] > rat(0, 1) && p[1] < rat(4, 1));
        }
    }
}
