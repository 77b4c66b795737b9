//! Orthocubic tangles: sphere-chain realizations of rational and algebraic
//! tangles inside the cubic section of the orthoplicial packing, the
//! twist/flip/mirror/sum calculus on them, closures to necklaces, and the
//! square-grid braid construction in the edge section.
//!
//! Every tangle keeps its four open-path endpoints on the four fixed base
//! corner spheres (NE above the upper-right circle, NW below the
//! upper-left, SW above the lower-left, SE below the lower-right). All
//! wiring joins introduced by the operations are verified to be exact
//! tangencies (inversive product −1) when they are made; a failed join is
//! a hard error, never a silent approximation.

use crate::exactnum::QuadExt;
use crate::inversive::{inv_product, GeomError, InvVec, MobiusMap};
use crate::packing::{ctx, z_color, Color};
use crate::tangle::{cf_expand, Slope, TangleError, TangleExpr};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error(transparent)]
    Diagram(#[from] crate::diagram::DiagramError),
    #[error("wiring failed: {0}")]
    Wiring(String),
    #[error("sphere collision while joining tangles (paths would merge)")]
    Collision,
    #[error("tangle corners are displaced from the base corners")]
    DisplacedCorners,
    #[error("closure or sum applied to a closed link")]
    AlreadyClosed,
    #[error("braid words are limited to two strands here (letters a/A); got `{0}`")]
    UnsupportedBraid(String),
    #[error("cannot build: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Corner {
    NW,
    NE,
    SW,
    SE,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::NW, Corner::NE, Corner::SW, Corner::SE];

    /// Base-sphere label sitting at this corner.
    pub fn label(self) -> i8 {
        match self {
            Corner::NW => -1,
            Corner::NE => 4,
            Corner::SW => 3,
            Corner::SE => -2,
        }
    }

    /// Corner relabelling induced by the diagonal flip (reflection in the
    /// plane {y = x}): the NE and SW corners stay, the other two swap.
    fn flipped(self) -> Corner {
        match self {
            Corner::NW => Corner::SE,
            Corner::SE => Corner::NW,
            c => c,
        }
    }
}

fn corner_vec(c: Corner) -> &'static InvVec {
    ctx().ortho_sphere(c.label())
}

#[derive(Debug, Clone)]
pub struct SphereEntry {
    pub vec: InvVec,
    pub color: Color,
}

/// An open tangle: two corner-to-corner strands plus any closed loops,
/// with all spheres deduplicated and indexed.
#[derive(Debug, Clone)]
pub struct OrthoTangle {
    pub spheres: Vec<SphereEntry>,
    pub strands: Vec<Strand>,
    pub closed: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct Strand {
    pub from: Corner,
    pub to: Corner,
    pub ids: Vec<usize>,
}

/// A closed necklace: disjoint cycles of pairwise tangent spheres.
#[derive(Debug, Clone)]
pub struct Necklace {
    pub spheres: Vec<InvVec>,
    pub cycles: Vec<Vec<usize>>,
    /// lives in the edge section (braid pipeline): coiled around the
    /// two-sphere tangency point, so it has no planar cubic diagram
    pub edge_section: bool,
    /// crossing count recorded by a builder whose diagram is not read off
    /// the stored coordinates (the braid pipeline)
    pub built_crossings: Option<usize>,
    /// planar-diagram code recorded by such a builder
    pub built_pd: Option<crate::diagram::PDCode>,
}

impl OrthoTangle {
    pub fn sphere_count(&self) -> usize {
        self.spheres.len()
    }

    /// The strand endpoint ids, by corner.
    pub fn end_id(&self, c: Corner) -> usize {
        for s in &self.strands {
            if s.from == c {
                return s.ids[0];
            }
            if s.to == c {
                return *s.ids.last().unwrap();
            }
        }
        unreachable!("every corner carries a strand end")
    }

    /// Corner pairing of the two strands, normalized.
    pub fn connectivity(&self) -> Vec<(Corner, Corner)> {
        let mut pairs: Vec<(Corner, Corner)> = self
            .strands
            .iter()
            .map(|s| {
                if s.from <= s.to {
                    (s.from, s.to)
                } else {
                    (s.to, s.from)
                }
            })
            .collect();
        pairs.sort();
        pairs
    }
}

impl Necklace {
    pub fn sphere_count(&self) -> usize {
        self.spheres.len()
    }
}

/// Raw strand material during surgery: corner-tagged sphere chains.
type RawStrand = (Corner, Vec<InvVec>, Corner);

fn product(a: &InvVec, b: &InvVec) -> QuadExt {
    inv_product(a, b).expect("dimension-checked")
}

fn assert_tangent(a: &InvVec, b: &InvVec, what: &str) -> Result<(), BuildError> {
    let p = product(a, b);
    if p == -QuadExt::one() {
        Ok(())
    } else {
        Err(BuildError::Wiring(format!(
            "{what}: join is not a tangency (product {p})"
        )))
    }
}

/// Assemble and validate a tangle from raw strands and closed loops:
/// exactly two strands covering the four base corners, every sphere used
/// in one path position, consecutive spheres exactly tangent.
fn assemble(open: Vec<RawStrand>, closed: Vec<Vec<InvVec>>) -> Result<OrthoTangle, BuildError> {
    if open.len() != 2 {
        return Err(BuildError::Wiring(format!(
            "expected two open strands, got {}",
            open.len()
        )));
    }
    let mut corners: Vec<Corner> = open.iter().flat_map(|(a, _, b)| [*a, *b]).collect();
    corners.sort();
    corners.dedup();
    if corners.len() != 4 {
        return Err(BuildError::Wiring("strand ends do not cover the four corners".into()));
    }
    for (a, path, b) in &open {
        if path.first() != Some(corner_vec(*a)) || path.last() != Some(corner_vec(*b)) {
            return Err(BuildError::DisplacedCorners);
        }
    }
    let mut spheres: Vec<SphereEntry> = Vec::new();
    let mut index: BTreeMap<Vec<QuadExt>, usize> = BTreeMap::new();
    let mut intern = |v: &InvVec| -> Result<usize, BuildError> {
        let k = v.coords().to_vec();
        if let Some(&id) = index.get(&k) {
            // a sphere may appear in at most one path position
            let _ = id;
            return Err(BuildError::Collision);
        }
        let color = z_color(v)?;
        let id = spheres.len();
        spheres.push(SphereEntry {
            vec: v.clone(),
            color,
        });
        index.insert(k, id);
        Ok(id)
    };
    let mut strands = Vec::new();
    for (a, path, b) in &open {
        for w in path.windows(2) {
            assert_tangent(&w[0], &w[1], "strand edge")?;
        }
        let ids = path.iter().map(&mut intern).collect::<Result<Vec<_>, _>>()?;
        strands.push(Strand {
            from: *a,
            to: *b,
            ids,
        });
    }
    let mut closed_ids = Vec::new();
    for loop_path in &closed {
        if loop_path.len() < 3 {
            return Err(BuildError::Wiring("closed loop shorter than three spheres".into()));
        }
        for w in loop_path.windows(2) {
            assert_tangent(&w[0], &w[1], "loop edge")?;
        }
        assert_tangent(loop_path.last().unwrap(), &loop_path[0], "loop closure")?;
        let ids = loop_path
            .iter()
            .map(&mut intern)
            .collect::<Result<Vec<_>, _>>()?;
        closed_ids.push(ids);
    }
    Ok(OrthoTangle {
        spheres,
        strands,
        closed: closed_ids,
    })
}

fn raw_strands(t: &OrthoTangle) -> Vec<RawStrand> {
    t.strands
        .iter()
        .map(|s| {
            (
                s.from,
                s.ids.iter().map(|&i| t.spheres[i].vec.clone()).collect(),
                s.to,
            )
        })
        .collect()
}

fn raw_closed(t: &OrthoTangle) -> Vec<Vec<InvVec>> {
    t.closed
        .iter()
        .map(|c| c.iter().map(|&i| t.spheres[i].vec.clone()).collect())
        .collect()
}

fn map_path(m: &MobiusMap, path: &[InvVec]) -> Vec<InvVec> {
    path.iter().map(|v| m.apply(v).unwrap()).collect()
}

/// The three elementary tangles on the four corner spheres.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementaryKind {
    /// two horizontal strands (slope 0)
    Zero,
    /// two vertical strands (slope ∞)
    Infinity,
    /// one positive crossing (slope 1)
    One,
}

pub fn elementary(kind: ElementaryKind) -> OrthoTangle {
    use Corner::*;
    let pairs: [(Corner, Corner); 2] = match kind {
        ElementaryKind::Infinity => [(NW, SW), (NE, SE)],
        ElementaryKind::Zero => [(NW, NE), (SW, SE)],
        ElementaryKind::One => [(NW, SE), (SW, NE)],
    };
    let open = pairs
        .iter()
        .map(|&(a, b)| (a, vec![corner_vec(a).clone(), corner_vec(b).clone()], b))
        .collect();
    assemble(open, Vec::new()).expect("elementary tangles are valid")
}

/// Diagonal flip: reflect through the plane {y = x}. NE and SW corners are
/// fixed by the reflection, NW and SE trade places.
pub fn flip(t: &OrthoTangle) -> Result<OrthoTangle, BuildError> {
    let m = &ctx().flip3;
    let open = raw_strands(t)
        .into_iter()
        .map(|(a, p, b)| (a.flipped(), map_path(m, &p), b.flipped()))
        .collect();
    let closed = raw_closed(t).iter().map(|p| map_path(m, p)).collect();
    assemble(open, closed)
}

/// Mirror: conjugate the tangle by the color-reversing shift and
/// re-terminate the strands on the base corners.
///
/// Three wiring patterns exist, tried in order and each validated join by
/// join. (1) Outward rewire: a tangle containing the four inner base
/// spheres expands one ring; the base corners then arrive mid-strand in
/// the image, the corner–corner connector edges are cut there and the
/// outer stubs rejoined along the original corner pairing — no spheres are
/// added. (2) Inward attach: the tangle shrinks one ring and each corner
/// attaches to the image of its old end (four new spheres); the inward
/// copy stays between the corners, so this is the only form that can be
/// used as a summand. (3) Outward attach: as (2) with the expanding shift,
/// for shapes whose inward image would land on the corners.
pub fn mirror(t: &OrthoTangle) -> Result<OrthoTangle, BuildError> {
    if count_inner_spheres(t) == 4 {
        if let Ok(m) = mirror_outward_rewire(t) {
            return Ok(m);
        }
    }
    match mirror_attach(t, false) {
        Ok(m) => Ok(m),
        Err(_) => mirror_attach(t, true),
    }
}

/// Mirror restricted to the inward pattern, whose image stays inside the
/// corner frame; summands must use this form.
pub fn mirror_contained(t: &OrthoTangle) -> Result<OrthoTangle, BuildError> {
    mirror_attach(t, false)
}

fn count_inner_spheres(t: &OrthoTangle) -> usize {
    let c = ctx();
    let have: std::collections::BTreeSet<Vec<QuadExt>> = t
        .spheres
        .iter()
        .map(|e| e.vec.coords().to_vec())
        .collect();
    [1i8, 2, -3, -4]
        .iter()
        .filter(|&&l| have.contains(c.ortho_sphere(l).coords()))
        .count()
}

fn corner_positions() -> BTreeMap<Vec<QuadExt>, Corner> {
    Corner::ALL
        .iter()
        .map(|&x| (corner_vec(x).coords().to_vec(), x))
        .collect()
}

fn mirror_map(expanding: bool) -> MobiusMap {
    let c = ctx();
    if expanding {
        c.nu.map.clone()
    } else {
        c.nu.map.inverse()
    }
}

/// Attach pattern: conjugate, then extend each strand to a fresh corner
/// sphere at both ends. Requires the image to stay clear of the corners.
fn mirror_attach(t: &OrthoTangle, expanding: bool) -> Result<OrthoTangle, BuildError> {
    let nu = mirror_map(expanding);
    let corner_vecs = corner_positions();
    let closed: Vec<Vec<InvVec>> = raw_closed(t).iter().map(|p| map_path(&nu, p)).collect();
    for loop_path in &closed {
        for v in loop_path {
            if corner_vecs.contains_key(v.coords()) {
                return Err(BuildError::Wiring(
                    "mirror: a closed loop landed on a base corner".into(),
                ));
            }
        }
    }
    let open = raw_strands(t)
        .into_iter()
        .map(|(a, p, b)| -> Result<RawStrand, BuildError> {
            let p = map_path(&nu, &p);
            if p
                .iter()
                .any(|v| corner_vecs.contains_key(v.coords()))
            {
                return Err(BuildError::Wiring(
                    "mirror: image meets the base corners; attach pattern unusable".into(),
                ));
            }
            let ca = corner_vec(a).clone();
            let cb = corner_vec(b).clone();
            assert_tangent(&ca, &p[0], "mirror corner attach")?;
            assert_tangent(p.last().unwrap(), &cb, "mirror corner attach")?;
            let mut path = vec![ca];
            path.extend(p);
            path.push(cb);
            Ok((a, path, b))
        })
        .collect::<Result<Vec<_>, _>>()?;
    assemble(open, closed)
}

/// Outward rewire pattern: after the expanding shift every base corner
/// occurs mid-strand; cut the two corner–corner connector edges and rejoin
/// the four outer stubs along the original corner pairing.
fn mirror_outward_rewire(t: &OrthoTangle) -> Result<OrthoTangle, BuildError> {
    let nu = mirror_map(true);
    let corner_vecs = corner_positions();
    let mapped: Vec<(Corner, Vec<InvVec>, Corner)> = raw_strands(t)
        .into_iter()
        .map(|(a, p, b)| (a, map_path(&nu, &p), b))
        .collect();
    let closed: Vec<Vec<InvVec>> = raw_closed(t).iter().map(|p| map_path(&nu, p)).collect();
    for loop_path in &closed {
        for v in loop_path {
            if corner_vecs.contains_key(v.coords()) {
                return Err(BuildError::Wiring(
                    "mirror: a closed loop landed on a base corner".into(),
                ));
            }
        }
    }
    let occurs: Vec<Corner> = mapped
        .iter()
        .flat_map(|(_, p, _)| p.iter())
        .filter_map(|v| corner_vecs.get(v.coords()).copied())
        .collect();
    if occurs.len() != 4 {
        return Err(BuildError::Wiring(format!(
            "mirror: expected the four corners inside the outward image, found {}",
            occurs.len()
        )));
    }

    let mut fragments: BTreeMap<Corner, Vec<InvVec>> = BTreeMap::new();
    for (_, p, _) in &mapped {
        let marks: Vec<Option<Corner>> = p
            .iter()
            .map(|v| corner_vecs.get(v.coords()).copied())
            .collect();
        let cut = (0..p.len() - 1)
            .filter(|&i| marks[i].is_some() && marks[i + 1].is_some())
            .collect::<Vec<_>>();
        if cut.len() != 1 {
            return Err(BuildError::Wiring(format!(
                "mirror: expected one corner–corner connector per strand, found {}",
                cut.len()
            )));
        }
        let i = cut[0];
        let (ca, cb) = (marks[i].unwrap(), marks[i + 1].unwrap());
        if ctx_color(ca) == ctx_color(cb) {
            return Err(BuildError::Wiring(
                "mirror: refusing to cut a same-color (crossing) edge".into(),
            ));
        }
        // fragment paths run corner → outer stub
        let mut left: Vec<InvVec> = p[..=i].to_vec();
        left.reverse();
        let right: Vec<InvVec> = p[i + 1..].to_vec();
        if fragments.insert(ca, left).is_some() || fragments.insert(cb, right).is_some() {
            return Err(BuildError::Wiring("mirror: corner visited twice".into()));
        }
    }
    let open = t
        .strands
        .iter()
        .map(|s| -> Result<RawStrand, BuildError> {
            let fa = fragments
                .remove(&s.from)
                .ok_or_else(|| BuildError::Wiring("mirror: missing fragment".into()))?;
            let fb = fragments
                .remove(&s.to)
                .ok_or_else(|| BuildError::Wiring("mirror: missing fragment".into()))?;
            assert_tangent(fa.last().unwrap(), fb.last().unwrap(), "mirror rejoin")?;
            let mut path = fa;
            path.extend(fb.into_iter().rev());
            Ok((s.from, path, s.to))
        })
        .collect::<Result<Vec<_>, _>>()?;
    assemble(open, closed)
}

fn ctx_color(c: Corner) -> Color {
    z_color(corner_vec(c)).unwrap()
}

/// Tangle addition: shift the left summand west and the right summand
/// east, then bridge the left East ends to the right West ends through the
/// two fixed tangent base pairs.
pub fn add(l: &OrthoTangle, r: &OrthoTangle) -> Result<OrthoTangle, BuildError> {
    let c = ctx();
    let lm = &c.mu_minus.map;
    let rm = &c.mu_plus.map;
    use Corner::*;

    // terminals: (side, corner) with side 0 = left, 1 = right
    let term = |side: usize, x: Corner| -> usize {
        side * 4
            + match x {
                NW => 0,
                NE => 1,
                SW => 2,
                SE => 3,
            }
    };
    let mut strands: Vec<(usize, Vec<InvVec>, usize)> = Vec::new();
    for (a, p, b) in raw_strands(l) {
        strands.push((term(0, a), map_path(lm, &p), term(0, b)));
    }
    for (a, p, b) in raw_strands(r) {
        strands.push((term(1, a), map_path(rm, &p), term(1, b)));
    }
    // the shifted East/West corner spheres form the fixed bridge pairs
    let links = vec![
        (term(0, NE), term(1, NW)),
        (term(0, SE), term(1, SW)),
    ];
    let free = vec![
        (term(0, NW), NW),
        (term(0, SW), SW),
        (term(1, NE), NE),
        (term(1, SE), SE),
    ];
    // frozen wiring table: the bridged end spheres are the two tangent base
    // pairs (small upper, small lower); check before stitching
    let expect = [
        (term(0, NE), c.ortho_sphere(2)),
        (term(1, NW), c.ortho_sphere(-3)),
        (term(0, SE), c.ortho_sphere(-4)),
        (term(1, SW), c.ortho_sphere(1)),
    ];
    for (tm, want) in expect {
        let got = terminal_sphere(&strands, tm);
        if got != want {
            return Err(BuildError::Wiring(format!(
                "sum bridge terminal is not the expected base sphere (terminal {tm})"
            )));
        }
    }
    let (open, mut cycles) = stitch(strands, &links, &free)?;
    let mut closed: Vec<Vec<InvVec>> = raw_closed(l).iter().map(|p| map_path(lm, p)).collect();
    closed.extend(raw_closed(r).iter().map(|p| map_path(rm, p)));
    closed.append(&mut cycles);
    assemble(open, closed)
}

fn terminal_sphere(
    strands: &[(usize, Vec<InvVec>, usize)],
    term: usize,
) -> &InvVec {
    for (a, p, b) in strands {
        if *a == term {
            return &p[0];
        }
        if *b == term {
            return p.last().unwrap();
        }
    }
    unreachable!("terminal present")
}

/// Join corner-tagged strands along `links` (each link is one tangency
/// edge between two strand ends), reading off the open paths that start
/// and end at `free` terminals and any closed cycles formed on the way.
fn stitch(
    strands: Vec<(usize, Vec<InvVec>, usize)>,
    links: &[(usize, usize)],
    free: &[(usize, Corner)],
) -> Result<(Vec<RawStrand>, Vec<Vec<InvVec>>), BuildError> {
    let mut end_of: BTreeMap<usize, (usize, bool)> = BTreeMap::new(); // term -> (strand, at_front)
    for (i, (a, _, b)) in strands.iter().enumerate() {
        end_of.insert(*a, (i, true));
        end_of.insert(*b, (i, false));
    }
    let link_of: BTreeMap<usize, usize> = links
        .iter()
        .flat_map(|&(x, y)| [(x, y), (y, x)])
        .collect();
    let free_of: BTreeMap<usize, Corner> = free.iter().copied().collect();
    let mut used = vec![false; strands.len()];
    let mut open = Vec::new();

    for &(start_term, corner_a) in free {
        let (si, _) = end_of[&start_term];
        if used[si] {
            continue;
        }
        let mut path: Vec<InvVec> = Vec::new();
        let mut term = start_term;
        let corner_b;
        loop {
            let (i, at_front) = end_of[&term];
            if used[i] {
                return Err(BuildError::Wiring("stitch: strand reused".into()));
            }
            used[i] = true;
            let mut seg = strands[i].1.clone();
            if !at_front {
                seg.reverse();
            }
            let other = if at_front { strands[i].2 } else { strands[i].0 };
            if let Some(prev) = path.last() {
                assert_tangent(prev, &seg[0], "sum bridge")?;
            }
            path.extend(seg);
            if let Some(&c) = free_of.get(&other) {
                corner_b = c;
                break;
            }
            term = *link_of
                .get(&other)
                .ok_or_else(|| BuildError::Wiring("stitch: dangling terminal".into()))?;
        }
        open.push((corner_a, path, corner_b));
    }

    let mut cycles = Vec::new();
    for i in 0..strands.len() {
        if used[i] {
            continue;
        }
        let mut cycle: Vec<InvVec> = Vec::new();
        let start = strands[i].0;
        let mut term = start;
        loop {
            let (j, at_front) = end_of[&term];
            if used[j] {
                return Err(BuildError::Wiring("stitch: cycle strand reused".into()));
            }
            used[j] = true;
            let mut seg = strands[j].1.clone();
            if !at_front {
                seg.reverse();
            }
            let other = if at_front { strands[j].2 } else { strands[j].0 };
            if let Some(prev) = cycle.last() {
                assert_tangent(prev, &seg[0], "cycle bridge")?;
            }
            cycle.extend(seg);
            let next = *link_of
                .get(&other)
                .ok_or_else(|| BuildError::Wiring("stitch: open chain without free ends".into()))?;
            if next == start {
                break;
            }
            term = next;
        }
        assert_tangent(cycle.last().unwrap(), &cycle[0], "cycle closure")?;
        cycles.push(cycle);
    }
    Ok((open, cycles))
}

/// Half twist: prepend one crossing block on the west side.
pub fn half_twist(t: &OrthoTangle, sign: i32) -> Result<OrthoTangle, BuildError> {
    let one = elementary(ElementaryKind::One);
    let block = if sign >= 0 { one } else { mirror(&one)? };
    add(&block, t)
}

/// The twist-and-flip pipeline over a coefficient list.
///
/// The full variant folds `|aᵢ|` signed half twists and a flip per
/// coefficient starting from the vertical tangle. The reduced variant
/// (nonnegative head, positive tail) seeds with the single-crossing tangle
/// and spends one twist fewer on the innermost coefficient, which keeps
/// the sphere count at exactly four per crossing.
pub fn conway(coeffs: &[i64], reduced: bool) -> Result<OrthoTangle, BuildError> {
    for (i, &a) in coeffs.iter().enumerate() {
        if i > 0 && a == 0 {
            return Err(TangleError::InteriorZero(i).into());
        }
    }
    if coeffs.is_empty() {
        return Ok(elementary(ElementaryKind::Infinity));
    }
    if reduced {
        let n = coeffs.len();
        if coeffs[0] < 0 || coeffs[1..].iter().any(|&a| a <= 0) {
            return Err(BuildError::Unsupported(
                "reduced pipeline needs a nonnegative head and positive tail".into(),
            ));
        }
        if n == 1 && coeffs[0] == 0 {
            return Ok(elementary(ElementaryKind::Zero));
        }
        let mut t = elementary(ElementaryKind::One);
        for _ in 0..(coeffs[n - 1] - 1) {
            t = half_twist(&t, 1)?;
        }
        for i in (0..n - 1).rev() {
            t = flip(&t)?;
            for _ in 0..coeffs[i] {
                t = half_twist(&t, 1)?;
            }
        }
        Ok(t)
    } else {
        let mut t = elementary(ElementaryKind::Infinity);
        for i in (0..coeffs.len()).rev() {
            t = flip(&t)?;
            let a = coeffs[i];
            for _ in 0..a.unsigned_abs() {
                t = half_twist(&t, a.signum() as i32)?;
            }
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureKind {
    Numerator,
    Denominator,
}

/// Close a tangle by joining its corner spheres pairwise: north and south
/// pairs for the numerator, west and east pairs for the denominator. Both
/// joining edges are tangent base pairs.
pub fn closure(t: &OrthoTangle, kind: ClosureKind) -> Result<Necklace, BuildError> {
    use Corner::*;
    let term = |x: Corner| -> usize {
        match x {
            NW => 0,
            NE => 1,
            SW => 2,
            SE => 3,
        }
    };
    let strands: Vec<(usize, Vec<InvVec>, usize)> = raw_strands(t)
        .into_iter()
        .map(|(a, p, b)| (term(a), p, term(b)))
        .collect();
    let links = match kind {
        ClosureKind::Numerator => vec![(term(NW), term(NE)), (term(SW), term(SE))],
        ClosureKind::Denominator => vec![(term(NW), term(SW)), (term(NE), term(SE))],
    };
    let (open, mut cycles) = stitch(strands, &links, &[])?;
    if !open.is_empty() {
        return Err(BuildError::Wiring("closure left open strands".into()));
    }
    cycles.extend(raw_closed(t));
    necklace_from_cycles(cycles)
}

fn necklace_from_cycles(cycles: Vec<Vec<InvVec>>) -> Result<Necklace, BuildError> {
    let mut spheres: Vec<InvVec> = Vec::new();
    let mut index: BTreeMap<Vec<QuadExt>, usize> = BTreeMap::new();
    let mut out_cycles = Vec::new();
    for cyc in cycles {
        for w in cyc.windows(2) {
            assert_tangent(&w[0], &w[1], "necklace edge")?;
        }
        if cyc.len() > 2 {
            assert_tangent(cyc.last().unwrap(), &cyc[0], "necklace closing edge")?;
        }
        let mut ids = Vec::new();
        for v in &cyc {
            let k = v.coords().to_vec();
            if index.contains_key(&k) {
                return Err(BuildError::Collision);
            }
            let id = spheres.len();
            index.insert(k, id);
            spheres.push(v.clone());
            ids.push(id);
        }
        out_cycles.push(ids);
    }
    Ok(Necklace {
        spheres,
        cycles: out_cycles,
        edge_section: false,
        built_crossings: None,
        built_pd: None,
    })
}

/// Exact packing validation: unit self-products, consecutive tangencies,
/// and no overlapping pair anywhere (product ≤ −1 off the diagonal).
pub fn validate_packing(n: &Necklace) -> Result<(), BuildError> {
    for v in &n.spheres {
        if v.self_product() != QuadExt::one() {
            return Err(BuildError::Wiring("sphere self-product is not 1".into()));
        }
    }
    for i in 0..n.spheres.len() {
        for j in (i + 1)..n.spheres.len() {
            let p = product(&n.spheres[i], &n.spheres[j]);
            if (&p + &QuadExt::one()).is_positive() {
                return Err(BuildError::Wiring(format!(
                    "spheres {i},{j} overlap: product {p}"
                )));
            }
        }
    }
    for cyc in &n.cycles {
        for w in cyc.windows(2) {
            assert_tangent(&n.spheres[w[0]], &n.spheres[w[1]], "cycle edge")?;
        }
        if cyc.len() > 2 {
            assert_tangent(&n.spheres[*cyc.last().unwrap()], &n.spheres[cyc[0]], "cycle edge")?;
        }
    }
    Ok(())
}

/// Result of evaluating a tangle expression.
#[derive(Debug, Clone)]
pub enum Built {
    Tangle(OrthoTangle),
    Necklace(Necklace),
}

/// Evaluate a tangle expression geometrically. Rational subtrees with a
/// definite slope sign go through the reduced pipeline (mirrored for
/// negative slopes); mixed-sign coefficient lists run the full pipeline.
/// Mirrors taken inside a sum use the contained (inward) pattern so that
/// the summand stays inside the corner frame.
pub fn build(e: &TangleExpr) -> Result<Built, BuildError> {
    build_inner(e, false, false)
}

/// Like [`build`], optionally forcing the full twist-and-flip pipeline for
/// every rational subtree.
pub fn build_opts(e: &TangleExpr, full: bool) -> Result<Built, BuildError> {
    build_inner(e, false, full)
}

fn take_mirror(t: &OrthoTangle, in_sum: bool) -> Result<OrthoTangle, BuildError> {
    if in_sum {
        mirror_contained(t)
    } else {
        mirror(t)
    }
}

fn build_inner(e: &TangleExpr, in_sum: bool, full: bool) -> Result<Built, BuildError> {
    Ok(match e {
        TangleExpr::Elementary(k) => Built::Tangle(match k {
            crate::tangle::Elementary::Zero => elementary(ElementaryKind::Zero),
            crate::tangle::Elementary::Infinity => elementary(ElementaryKind::Infinity),
            crate::tangle::Elementary::One => elementary(ElementaryKind::One),
        }),
        TangleExpr::Rational(cs) => {
            let nonneg = cs.iter().all(|&a| a >= 0);
            let nonpos = cs.iter().all(|&a| a <= 0);
            if full || (!nonneg && !nonpos) {
                Built::Tangle(conway(cs, false)?)
            } else if nonneg {
                Built::Tangle(conway(cs, true)?)
            } else {
                let abs: Vec<i64> = cs.iter().map(|a| -a).collect();
                Built::Tangle(take_mirror(&conway(&abs, true)?, in_sum)?)
            }
        }
        TangleExpr::Fraction(s) => Built::Tangle(build_slope_opts(s, in_sum, full)?),
        TangleExpr::Sum(l, r) => {
            let (Built::Tangle(lt), Built::Tangle(rt)) =
                (build_inner(l, true, full)?, build_inner(r, true, full)?)
            else {
                return Err(BuildError::AlreadyClosed);
            };
            Built::Tangle(add(&lt, &rt)?)
        }
        TangleExpr::Neg(x) => {
            let Built::Tangle(t) = build_inner(x, in_sum, full)? else {
                return Err(BuildError::AlreadyClosed);
            };
            Built::Tangle(take_mirror(&t, in_sum)?)
        }
        TangleExpr::Flip(x) => {
            let Built::Tangle(t) = build_inner(x, in_sum, full)? else {
                return Err(BuildError::AlreadyClosed);
            };
            Built::Tangle(flip(&t)?)
        }
        TangleExpr::Pretzel(qs) => {
            if qs.is_empty() {
                return Err(BuildError::Unsupported("empty pretzel".into()));
            }
            let contained = in_sum || qs.len() > 1;
            let mut acc: Option<OrthoTangle> = None;
            for &q in qs {
                if q == 0 {
                    return Err(BuildError::Unsupported("pretzel coefficient zero".into()));
                }
                let t = build_slope_opts(&Slope::from_ints(1, q), contained, full)?;
                acc = Some(match acc {
                    None => t,
                    Some(prev) => add(&prev, &t)?,
                });
            }
            Built::Tangle(acc.unwrap())
        }
        TangleExpr::ClosureN(x) => {
            let Built::Tangle(t) = build_inner(x, false, full)? else {
                return Err(BuildError::AlreadyClosed);
            };
            Built::Necklace(closure(&t, ClosureKind::Numerator)?)
        }
        TangleExpr::ClosureD(x) => {
            let Built::Tangle(t) = build_inner(x, false, full)? else {
                return Err(BuildError::AlreadyClosed);
            };
            Built::Necklace(closure(&t, ClosureKind::Denominator)?)
        }
        TangleExpr::Braid(w) => Built::Necklace(braid_grid(w, false)?),
    })
}

fn build_slope_opts(s: &Slope, in_sum: bool, full: bool) -> Result<OrthoTangle, BuildError> {
    if s.is_infinite() {
        return Ok(elementary(ElementaryKind::Infinity));
    }
    if s.is_zero() {
        return Ok(elementary(ElementaryKind::Zero));
    }
    if s.is_negative() {
        if full {
            // negating every coefficient negates the slope, and the full
            // pipeline handles negative twists directly
            let coeffs: Vec<i64> = cf_expand(&s.abs())?.iter().map(|a| -a).collect();
            return conway(&coeffs, false);
        }
        let pos = conway(&cf_expand(&s.abs())?, true)?;
        take_mirror(&pos, in_sum)
    } else if full {
        conway(&cf_expand(s)?, false)
    } else {
        conway(&cf_expand(s)?, true)
    }
}

// ------------------------------------------------------------------
// Braid-grid construction in the edge section
// ------------------------------------------------------------------

/// Fixed data of the strip frame: the edge section inverted through the
/// unit sphere centered at the tangency point of the two small upper
/// spheres, then rotated so the square grid lies in {z = 0}.
struct StripFrame {
    /// strip frame → original frame
    from_strip: MobiusMap,
    /// one-row advance (column-preserving translation of the ladder)
    advance: MobiusMap,
    /// the two walls (half-spaces) bounding the strip
    wall_over: InvVec,
    wall_under: InvVec,
    /// bottom two grid rows: [row1, row2], each [col0, col1]
    rows: [[InvVec; 2]; 2],
    /// middles of the square between rows 1 and 2: (above, below)
    mid_above: InvVec,
    mid_below: InvVec,
}

fn strip_frame() -> Result<StripFrame, BuildError> {
    let c = ctx();
    // inversion sphere of radius 1 at the tangency point of the spheres
    // with labels 1 and 2, which lies at (0, 0, √2−1)
    let p0 = [
        QuadExt::zero(),
        QuadExt::zero(),
        QuadExt::from_parts(-1, 1, 1, 1),
    ];
    let k = InvVec::sphere_from_bend_center(&QuadExt::one(), &p0)?;
    let w = MobiusMap::inversion(&k)?;
    // rotation (x,y,z) → ((x+y)/√2, z, (x−y)/√2)
    let h = QuadExt::from_parts(0, 1, 1, 2); // 1/√2
    let mut rot = crate::linalg::Mat::zeros(5, 5);
    rot[(0, 0)] = h.clone();
    rot[(0, 1)] = h.clone();
    rot[(1, 2)] = QuadExt::one();
    rot[(2, 0)] = h.clone();
    rot[(2, 1)] = -&h;
    rot[(3, 3)] = QuadExt::one();
    rot[(4, 4)] = QuadExt::one();
    let r = MobiusMap::from_mat(3, rot)?;
    let to_strip = r.compose(&w);
    let from_strip = to_strip.inverse();

    let g = |label: i8| -> InvVec { to_strip.apply(c.ortho_sphere(label)).unwrap() };
    let wall_a = g(1);
    let wall_b = g(2);
    // grid rows: row 1 = images of the two small lower spheres, row 2 of
    // the two big upper ones
    let rows = [[g(-4), g(-3)], [g(3), g(4)]];
    let mid_below_v = g(-1);
    let mid_above_v = g(-2);
    // conjugated edge-section generators and the row-advance translation
    // T = s₁₂₃₄ ∘ r₃₄ ∘ (r₄₄̄ r₃₄)², the composition of the reflections in
    // the two horizontal mirror planes of the bottom square
    let conj = |m: &MobiusMap| to_strip.compose(m).compose(&from_strip);
    let r34 = conj(&crate::packing::signed_perm_symmetry(
        &c.ortho,
        &crate::packing::SignedPerm::swap(4, 3, 4),
    )?);
    let r44 = conj(&crate::packing::signed_perm_symmetry(
        &c.ortho,
        &crate::packing::SignedPerm::swap(4, 4, -4),
    )?);
    let s1234 = conj(&MobiusMap::inversion(
        &c.ortho.duals[&crate::packing::key(&[1, 2, 3, 4])],
    )?);
    let half_turn = r44.compose(&r34);
    let advance = s1234
        .compose(&r34)
        .compose(&half_turn)
        .compose(&half_turn);

    // classify walls and middles by z-sign
    let (wall_over, wall_under) = match z_color(&wall_a)? {
        Color::Black => (wall_a, wall_b),
        Color::White => (wall_b, wall_a),
    };
    let (mid_above, mid_below) = match z_color(&mid_above_v)? {
        Color::Black => (mid_above_v, mid_below_v),
        Color::White => (mid_below_v, mid_above_v),
    };
    // the advance must translate the ladder one row up, column-preserving
    for (bottom, top) in rows[0].iter().zip(rows[1].iter()) {
        if &advance.apply(bottom)? != top {
            return Err(BuildError::Wiring(
                "edge-section advance does not translate the grid".into(),
            ));
        }
    }
    Ok(StripFrame {
        from_strip,
        advance,
        wall_over,
        wall_under,
        rows,
        mid_above,
        mid_below,
    })
}

impl StripFrame {
    /// Grid sphere at column c ∈ {0,1} and row t ≥ 1.
    fn grid(&self, c: usize, t: usize) -> InvVec {
        assert!(c < 2 && t >= 1);
        if t <= 2 {
            return self.rows[t - 1][c].clone();
        }
        self.advance.apply(&self.grid(c, t - 1)).unwrap()
    }

    /// Middles of the square between rows t and t+1: (above, below).
    fn mids(&self, t: usize) -> (InvVec, InvVec) {
        assert!(t >= 1);
        let mut a = self.mid_above.clone();
        let mut b = self.mid_below.clone();
        for _ in 1..t {
            a = self.advance.apply(&a).unwrap();
            b = self.advance.apply(&b).unwrap();
        }
        match z_color(&a).unwrap() {
            Color::Black => (a, b),
            Color::White => (b, a),
        }
    }
}

/// Necklace of a two-strand braid word routed on the square grid of the
/// edge section. Letters: `a` = positive generator, `A` = its inverse.
///
/// Plain closure keeps everything inside the sphere packing: the strands
/// wrap from the top row back to the bottom through the two spheres whose
/// tangency point centers the strip, and the result is mapped back to the
/// bounded frame (4n+2 spheres). With `halfspace_closure` the last
/// crossing and the wrap are carried by the two half-space walls, which
/// are tangent at infinity (4n spheres), and the necklace stays in the
/// strip frame.
pub fn braid_grid(word: &str, halfspace_closure: bool) -> Result<Necklace, BuildError> {
    if word.is_empty() || !word.chars().all(|ch| ch == 'a' || ch == 'A') {
        return Err(BuildError::UnsupportedBraid(word.to_string()));
    }
    let letters: Vec<bool> = word.chars().map(|ch| ch == 'a').collect(); // true = positive
    let n = letters.len();
    let frame = strip_frame()?;

    // strands climb the ladder through the first n−1 crossings, occupying
    // rows 1..n; crossing n and the wrap back to row 1 are carried by the
    // square-n middles plus the walls (plain) or the walls alone
    // (half-space closure, crossing at infinity)
    let mut paths: [Vec<InvVec>; 2] = [vec![frame.grid(0, 1)], vec![frame.grid(1, 1)]];
    let mut at_col: [usize; 2] = [0, 1];
    for (j, &positive) in letters.iter().take(n - 1).enumerate() {
        let t = j + 1;
        let (above, below) = frame.mids(t);
        let s_left = if at_col[0] == 0 { 0 } else { 1 };
        let s_right = 1 - s_left;
        // positive letter: the strand entering at column 0 passes over
        let (over, under) = if positive {
            (s_left, s_right)
        } else {
            (s_right, s_left)
        };
        paths[over].push(above.clone());
        paths[under].push(below.clone());
        for s in [over, under] {
            at_col[s] = 1 - at_col[s];
            paths[s].push(frame.grid(at_col[s], t + 1));
        }
    }

    // final crossing: over strand through the black side, under through the
    // white side; both re-enter the bottom row in the swapped column
    let positive = letters[n - 1];
    let s_left = if at_col[0] == 0 { 0 } else { 1 };
    let s_right = 1 - s_left;
    let (over, under) = if positive {
        (s_left, s_right)
    } else {
        (s_right, s_left)
    };
    let mut tail: [Vec<InvVec>; 2] = [Vec::new(), Vec::new()];
    if !halfspace_closure {
        let (above, below) = frame.mids(n);
        tail[over].push(above);
        tail[under].push(below);
    }
    tail[over].push(frame.wall_over.clone());
    tail[under].push(frame.wall_under.clone());
    let next = [1 - at_col[0], 1 - at_col[1]]; // bottom column after the swap

    let mut cycles: Vec<Vec<InvVec>> = Vec::new();
    let mut visited = [false; 2];
    for start in 0..2 {
        if visited[start] {
            continue;
        }
        let mut cyc: Vec<InvVec> = Vec::new();
        let mut s = start;
        loop {
            visited[s] = true;
            cyc.extend(paths[s].iter().cloned());
            cyc.extend(tail[s].iter().cloned());
            if next[s] == start {
                break;
            }
            s = next[s];
        }
        cycles.push(cyc);
    }

    let mut neck = necklace_from_cycles(cycles)?;
    if !halfspace_closure {
        // return to the bounded frame of the ambient packing
        let m = &frame.from_strip;
        neck.spheres = neck.spheres.iter().map(|v| m.apply(v).unwrap()).collect();
    }
    neck.edge_section = true;
    neck.built_crossings = Some(n);
    neck.built_pd = Some(crate::diagram::pd_from_braid_word(&letters)?);
    Ok(neck)
}

/// Sphere and crossing counts. Crossings come from the projected diagram
/// unless the builder recorded them (braid pipeline).
pub fn counts_necklace(n: &Necklace) -> Result<(usize, usize), BuildError> {
    let crossings = match n.built_crossings {
        Some(c) => c,
        None => crate::diagram::project_necklace(n)?.crossings.len(),
    };
    Ok((n.spheres.len(), crossings))
}

pub fn counts_tangle(t: &OrthoTangle) -> Result<(usize, usize), BuildError> {
    let d = crate::diagram::project_tangle(t)?;
    Ok((t.spheres.len(), d.crossings.len()))
}
