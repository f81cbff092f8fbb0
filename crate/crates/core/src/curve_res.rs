//! Resolution chains of plane-curve branches and the contact valuation `d_X`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::contfrac::{euclid_table, ContFracError, EuclidTable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CurveError {
    #[error(transparent)]
    Branch(#[from] ContFracError),
    #[error("unknown divisor {0}")]
    UnknownNode(NodeId),
    #[error("{0} and {1} do not meet")]
    NotAdjacent(NodeId, NodeId),
    #[error("the strict transform only meets {expected}, not {got}")]
    StrictTransformNode { expected: NodeId, got: NodeId },
    #[error("contact orders do not match the incident components of the location")]
    GammaMismatch,
    #[error("contact orders must be positive")]
    NonPositiveGamma,
    #[error("an arc lifting onto the strict transform away from the exceptional locus does not pass through the singular point")]
    StrictTransformOffExceptional,
    #[error("multiplicity is only defined on the exceptional locus")]
    NotExceptional,
    #[error("no valuation rule covers the intersection {0} and {1}")]
    Uncovered(NodeId, NodeId),
    #[error("theorem 1 takes at most two components, got {0}")]
    TooManyComponents(usize),
    #[error("depths {0} and {1} do not differ by exactly one")]
    DepthGap(i64, i64),
    #[error("malformed divisor id {0:?}, expected i.j.k")]
    BadNodeId(String),
}

/// Extended integer: a finite value or infinity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Ext {
    Fin(i64),
    Inf,
}

impl Ext {
    pub fn finite(self) -> Option<i64> {
        match self {
            Ext::Fin(v) => Some(v),
            Ext::Inf => None,
        }
    }
}

impl Add<i64> for Ext {
    type Output = Ext;
    fn add(self, rhs: i64) -> Ext {
        match self {
            Ext::Fin(v) => Ext::Fin(v + rhs),
            Ext::Inf => Ext::Inf,
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Fin(v) => write!(f, "{v}"),
            Ext::Inf => write!(f, "inf"),
        }
    }
}

impl Serialize for Ext {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Ext::Fin(v) => s.serialize_i64(*v),
            Ext::Inf => s.serialize_str("inf"),
        }
    }
}

/// Divisor `E_{i,j,k}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl NodeId {
    pub const fn new(i: usize, j: usize, k: usize) -> Self {
        Self { i, j, k }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}", self.i, self.j, self.k)
    }
}

impl Serialize for NodeId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for NodeId {
    type Err = CurveError;
    fn from_str(s: &str) -> Result<Self, CurveError> {
        let bad = || CurveError::BadNodeId(s.to_string());
        let parts: Vec<usize> = s
            .trim()
            .trim_start_matches('E')
            .split(['.', ','])
            .map(|p| p.parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        match parts[..] {
            [i, j, k] if i > 0 && j > 0 && k > 0 => Ok(NodeId::new(i, j, k)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveBranch {
    pub m: i64,
    pub exponents: Vec<i64>,
}

impl CurveBranch {
    pub fn new(m: i64, exponents: &[i64]) -> Result<Self, ContFracError> {
        crate::contfrac::check_branch(m, exponents)?;
        Ok(Self {
            m,
            exponents: exponents.to_vec(),
        })
    }

    /// `k_i`, with `k_0 = 0`.
    pub fn k(&self, i: usize) -> i64 {
        if i == 0 {
            0
        } else {
            self.exponents[i - 1]
        }
    }

    pub fn s(&self) -> usize {
        self.exponents.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainNode {
    pub id: NodeId,
    pub r: i64,
    #[serde(rename = "N")]
    pub n: i64,
    pub nu: i64,
    #[serde(rename = "M")]
    pub big_m: i64,
    pub mu: i64,
    pub is_f: bool,
    /// Divisors through the blown-up point, oldest first.
    #[serde(skip)]
    pub parents: Vec<NodeId>,
    pub neighbors: Vec<NodeId>,
}

/// The resolution of a branch: nodes in chain order plus creation order.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub branch: CurveBranch,
    pub table: EuclidTable,
    pub creation: Vec<NodeId>,
    pub chain: Vec<NodeId>,
    nodes: BTreeMap<NodeId, ChainNode>,
}

impl Resolution {
    pub fn node(&self, id: NodeId) -> Result<&ChainNode, CurveError> {
        self.nodes.get(&id).ok_or(CurveError::UnknownNode(id))
    }

    /// Nodes in chain order.
    pub fn chain_nodes(&self) -> Vec<&ChainNode> {
        self.chain.iter().map(|id| &self.nodes[id]).collect()
    }

    /// `F_i = E_{i, w(i), a_{i,w(i)}}`.
    pub fn f(&self, i: usize) -> NodeId {
        let row = &self.table.rows[i - 1];
        NodeId::new(i, row.w(), *row.a.last().unwrap() as usize)
    }

    pub fn adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.nodes.get(&a).is_some_and(|n| n.neighbors.contains(&b))
    }

    /// `k_{i-1} + a_{i,1} r_{i,1} + a_{i,3} r_{i,3} + ... + k r_{i,j}` for odd `j`.
    fn odd_sum(&self, i: usize, j: usize, k: i64) -> i64 {
        let row = &self.table.rows[i - 1];
        let mut acc = self.branch.k(i - 1);
        for jj in (1..j).step_by(2) {
            acc += row.a[jj - 1] * row.r[jj - 1];
        }
        acc + k * row.r[j - 1]
    }
}

pub fn build_chains(branch: &CurveBranch) -> Result<Resolution, CurveError> {
    let table = euclid_table(branch.m, &branch.exponents)?;
    let mut creation: Vec<NodeId> = Vec::new();
    let mut parents_of: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    let mut adj: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
    let mut last_f: Option<NodeId> = None;

    for (i0, row) in table.rows.iter().enumerate() {
        let i = i0 + 1;
        // last node created in each block of this row
        let mut last: BTreeMap<usize, NodeId> = BTreeMap::new();
        if row.a[0] == 0 {
            if let Some(f) = last_f {
                last.insert(1, f);
            }
        }
        for (j0, &aj) in row.a.iter().enumerate() {
            let j = j0 + 1;
            for k in 1..=aj as usize {
                let id = NodeId::new(i, j, k);
                let par: Vec<NodeId> = if k >= 2 {
                    if j == 1 {
                        vec![NodeId::new(i, 1, k - 1)]
                    } else {
                        vec![NodeId::new(i, j, k - 1), last[&(j - 1)]]
                    }
                } else if j == 1 {
                    last_f.into_iter().collect()
                } else if j == 2 {
                    last.get(&1).copied().or(last_f).into_iter().collect()
                } else {
                    last.get(&(j - 2)).into_iter().copied().chain([last[&(j - 1)]]).collect()
                };
                adj.insert(id, BTreeSet::new());
                if let [a, b] = par[..] {
                    adj.get_mut(&a).unwrap().remove(&b);
                    adj.get_mut(&b).unwrap().remove(&a);
                }
                for p in &par {
                    adj.get_mut(p).unwrap().insert(id);
                    adj.get_mut(&id).unwrap().insert(*p);
                }
                creation.push(id);
                parents_of.insert(id, par);
                last.insert(j, id);
            }
        }
        last_f = Some(NodeId::new(i, row.w(), *row.a.last().unwrap() as usize));
    }

    let mut nodes: BTreeMap<NodeId, ChainNode> = BTreeMap::new();
    for id in &creation {
        let row = &table.rows[id.i - 1];
        let par = parents_of[id].clone();
        let r = row.r[id.j - 1];
        let n = r + par.iter().map(|p| nodes[p].n).sum::<i64>();
        let mu = if par.is_empty() {
            1
        } else {
            par.iter().map(|p| nodes[p].mu).sum()
        };
        let nu = 2 + par.iter().map(|p| nodes[p].nu - 1).sum::<i64>();
        let is_f = id.j == row.w() && id.k == *row.a.last().unwrap() as usize;
        nodes.insert(
            *id,
            ChainNode {
                id: *id,
                r,
                n,
                nu,
                big_m: n - par.iter().map(|p| nodes[p].n).sum::<i64>(),
                mu,
                is_f,
                parents: par,
                neighbors: adj[id].iter().copied().collect(),
            },
        );
    }

    let mut chain = Vec::with_capacity(creation.len());
    for (i0, row) in table.rows.iter().enumerate() {
        let i = i0 + 1;
        for j in (1..=row.w()).step_by(2) {
            for k in 1..=row.a[j - 1] as usize {
                chain.push(NodeId::new(i, j, k));
            }
        }
        let last_even = row.w() - row.w() % 2;
        for j in (2..=last_even).rev().step_by(2) {
            for k in (1..=row.a[j - 1] as usize).rev() {
                chain.push(NodeId::new(i, j, k));
            }
        }
    }

    Ok(Resolution {
        branch: branch.clone(),
        table,
        creation,
        chain,
        nodes,
    })
}

/// Component through the lifted arc's origin.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Incidence {
    Divisor(NodeId),
    StrictTransform,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Location {
    /// The arc's origin is not on `X`.
    OffX,
    /// The arc lies on `X`.
    OnX,
    /// A point of `E_{1,1,1}` on no other component.
    SmoothPointE111,
    Interior(NodeId),
    Intersection(NodeId, NodeId),
    OnStrictTransform(Option<NodeId>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactProfile {
    pub location: Location,
    pub gammas: BTreeMap<Incidence, i64>,
}

impl ContactProfile {
    pub fn off_x() -> Self {
        Self {
            location: Location::OffX,
            gammas: BTreeMap::new(),
        }
    }

    pub fn on_x() -> Self {
        Self {
            location: Location::OnX,
            gammas: BTreeMap::new(),
        }
    }

    pub fn smooth_point(gamma: i64) -> Self {
        Self {
            location: Location::SmoothPointE111,
            gammas: [(Incidence::Divisor(NodeId::new(1, 1, 1)), gamma)].into(),
        }
    }

    pub fn interior(node: NodeId, gamma: i64) -> Self {
        Self {
            location: Location::Interior(node),
            gammas: [(Incidence::Divisor(node), gamma)].into(),
        }
    }

    pub fn intersection((a, ga): (NodeId, i64), (b, gb): (NodeId, i64)) -> Self {
        Self {
            location: Location::Intersection(a, b),
            gammas: [(Incidence::Divisor(a), ga), (Incidence::Divisor(b), gb)].into(),
        }
    }

    pub fn strict(node: NodeId, gamma: i64, gamma_x: i64) -> Self {
        Self {
            location: Location::OnStrictTransform(Some(node)),
            gammas: [
                (Incidence::Divisor(node), gamma),
                (Incidence::StrictTransform, gamma_x),
            ]
            .into(),
        }
    }

    fn gamma(&self, inc: Incidence) -> Result<i64, CurveError> {
        self.gammas.get(&inc).copied().ok_or(CurveError::GammaMismatch)
    }

    fn gamma_of(&self, id: NodeId) -> Result<i64, CurveError> {
        self.gamma(Incidence::Divisor(id))
    }

    /// Exceptional components through the origin of the lifted arc.
    pub fn divisors(&self) -> Vec<NodeId> {
        match self.location {
            Location::OffX | Location::OnX | Location::OnStrictTransform(None) => vec![],
            Location::SmoothPointE111 => vec![NodeId::new(1, 1, 1)],
            Location::Interior(a) | Location::OnStrictTransform(Some(a)) => vec![a],
            Location::Intersection(a, b) => vec![a, b],
        }
    }

    pub fn validate(&self, res: &Resolution) -> Result<(), CurveError> {
        let mut expected: BTreeSet<Incidence> =
            self.divisors().into_iter().map(Incidence::Divisor).collect();
        match self.location {
            Location::OnStrictTransform(None) => return Err(CurveError::StrictTransformOffExceptional),
            Location::OnStrictTransform(Some(a)) => {
                let f = res.f(res.branch.s());
                if a != f {
                    return Err(CurveError::StrictTransformNode { expected: f, got: a });
                }
                expected.insert(Incidence::StrictTransform);
            }
            Location::Intersection(a, b) => {
                res.node(a)?;
                res.node(b)?;
                if !res.adjacent(a, b) {
                    return Err(CurveError::NotAdjacent(a, b));
                }
            }
            _ => {}
        }
        for d in self.divisors() {
            res.node(d)?;
        }
        if self.gammas.keys().copied().collect::<BTreeSet<_>>() != expected {
            return Err(CurveError::GammaMismatch);
        }
        if self.gammas.values().any(|g| *g <= 0) {
            return Err(CurveError::NonPositiveGamma);
        }
        Ok(())
    }
}

/// `n = sum mu_k gamma_k` over the exceptional components through the origin.
pub fn multiplicity_n(res: &Resolution, profile: &ContactProfile) -> Result<i64, CurveError> {
    profile.validate(res)?;
    let divs = profile.divisors();
    if divs.is_empty() {
        return Err(CurveError::NotExceptional);
    }
    divs.iter()
        .map(|d| Ok(res.node(*d)?.mu * profile.gamma_of(*d)?))
        .sum()
}

/// Which rule of the case analysis produced a value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DxCase {
    OffX,
    OnX,
    /// (1) smooth point of `E_{1,1,1}`: `n`.
    SmoothE111,
    /// (2) `m` does not divide `n`: `n`.
    NotMultiple,
    /// (3) on `E_{i,j,k} != F_i` with `j` even: `lambda k_i`.
    EvenBlock,
    /// (4) interior of an odd-block divisor.
    OddInterior,
    /// (5) `E_{i,j,k} ∩ E_{i,j,k+1}`, `j` odd.
    OddConsecutive,
    /// (6) `E_{i,j,a_{i,j}} ∩ E_{i,j+2,1}`, `j` odd.
    OddToNextOdd,
    /// (7) `E_{i,j,a_{i,j}} ∩ F_i`, `j` odd, `w(i)` even.
    OddToF,
    /// (8) on the strict transform: `lambda k_s + gamma`.
    StrictTransform,
    /// Interior of `F_i` with `w(i)` even: `lambda k_i`.
    FInterior,
    /// `F_i` meeting the first divisor of the next chain: `lambda k_i + gamma`.
    CrossChain,
}

impl DxCase {
    /// Number of the rule in the classical case list, if it has one.
    pub fn number(self) -> Option<u8> {
        Some(match self {
            DxCase::SmoothE111 => 1,
            DxCase::NotMultiple => 2,
            DxCase::EvenBlock => 3,
            DxCase::OddInterior => 4,
            DxCase::OddConsecutive => 5,
            DxCase::OddToNextOdd => 6,
            DxCase::OddToF => 7,
            DxCase::StrictTransform => 8,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct DxOutcome {
    pub value: Ext,
    pub case: DxCase,
}

pub fn dx_curve(res: &Resolution, profile: &ContactProfile) -> Result<DxOutcome, CurveError> {
    let out = |value: Ext, case: DxCase| Ok(DxOutcome { value, case });
    match profile.location {
        Location::OffX => return out(Ext::Fin(0), DxCase::OffX),
        Location::OnX => return out(Ext::Inf, DxCase::OnX),
        _ => {}
    }
    let n = multiplicity_n(res, profile)?;
    let e111 = NodeId::new(1, 1, 1);
    if matches!(profile.location, Location::SmoothPointE111)
        || profile.location == Location::Interior(e111)
    {
        return out(Ext::Fin(n), DxCase::SmoothE111);
    }
    let m = res.branch.m;
    if n % m != 0 {
        return out(Ext::Fin(n), DxCase::NotMultiple);
    }
    let lambda = n / m;
    let b = &res.branch;
    match profile.location {
        Location::OnStrictTransform(Some(_)) => {
            let gx = profile.gamma(Incidence::StrictTransform)?;
            out(Ext::Fin(lambda * b.k(b.s()) + gx), DxCase::StrictTransform)
        }
        Location::Interior(a) => {
            if a.j % 2 == 0 {
                let case = if a == res.f(a.i) {
                    DxCase::FInterior
                } else {
                    DxCase::EvenBlock
                };
                out(Ext::Fin(lambda * b.k(a.i)), case)
            } else {
                out(
                    Ext::Fin(lambda * res.odd_sum(a.i, a.j, a.k as i64)),
                    DxCase::OddInterior,
                )
            }
        }
        Location::Intersection(x, y) => {
            for d in [x, y] {
                if d.j % 2 == 0 && d != res.f(d.i) {
                    return out(Ext::Fin(lambda * b.k(d.i)), DxCase::EvenBlock);
                }
            }
            let (a, bb) = if x < y { (x, y) } else { (y, x) };
            let gb = profile.gamma_of(bb)?;
            if a.i == bb.i {
                let row = &res.table.rows[a.i - 1];
                let a_full = row.a[a.j - 1] as usize;
                let base = lambda * res.odd_sum(a.i, a.j, a.k as i64) + gb;
                if a.j % 2 == 1 && bb.j == a.j && bb.k == a.k + 1 {
                    return out(Ext::Fin(base), DxCase::OddConsecutive);
                }
                if a.j % 2 == 1 && bb.j == a.j + 2 && a.k == a_full && bb.k == 1 {
                    return out(Ext::Fin(base), DxCase::OddToNextOdd);
                }
                if a.j % 2 == 1
                    && bb == res.f(a.i)
                    && row.w() % 2 == 0
                    && bb.j == a.j + 1
                    && a.k == a_full
                {
                    return out(Ext::Fin(base), DxCase::OddToF);
                }
                return Err(CurveError::Uncovered(a, bb));
            }
            if bb.i == a.i + 1 && a == res.f(a.i) {
                return out(Ext::Fin(lambda * b.k(a.i) + gb), DxCase::CrossChain);
            }
            Err(CurveError::Uncovered(a, bb))
        }
        _ => unreachable!("handled above"),
    }
}

/// `(depth, contact)` of one exceptional component for the lambda rule.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DepthContact {
    pub depth: i64,
    pub gamma: i64,
}

pub fn lambda_theorem1(components: &[DepthContact]) -> Result<i64, CurveError> {
    match components {
        [] => Ok(0),
        [c] => Ok(c.depth * c.gamma),
        [c1, c2] => {
            if (c1.depth - c2.depth).abs() != 1 {
                return Err(CurveError::DepthGap(c1.depth, c2.depth));
            }
            Ok(c1.depth * c1.gamma + c2.depth * c2.gamma)
        }
        _ => Err(CurveError::TooManyComponents(components.len())),
    }
}

/// Contact orders `c(E_i), c(E'_i), c(E''_i), c(H'_i), c(H''_i)` of the
/// lifted arc.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Theorem2Contacts {
    pub e: i64,
    pub e1: i64,
    pub e2: i64,
    pub h1: i64,
    pub h2: i64,
}

/// Valuation at a point where the strict transform meets the exceptional
/// locus non-transversally. `pre_contact` is `c(psi', E_i)` before the last
/// blow-up and defaults to `c(E_i) + c(E'_i) + c(E''_i)`. No clamping.
pub fn dx_theorem2(
    c: &Theorem2Contacts,
    d_zbar: Ext,
    d_wprime: Ext,
    e: i64,
    pre_contact: Option<i64>,
) -> Ext {
    let sum = c.e + c.e1 + c.e2;
    let inner = [
        (sum / 2).min(c.e1 + c.h1).min(c.e2 + c.h2),
        (c.e1 + c.h1).min(c.e + c.e1 - c.h2),
        (c.e2 + c.h2).min(c.e + c.e2 - c.h1),
    ]
    .into_iter()
    .max()
    .unwrap();
    let big = d_zbar + (e * sum + inner);
    big.min(d_wprime + e * pre_contact.unwrap_or(sum))
}
