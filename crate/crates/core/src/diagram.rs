//! Projection of orthocubic objects to planar diagrams with exact
//! crossing detection, planar-diagram codes, and the Kauffman bracket /
//! Jones polynomial used as the isotopy oracle, plus SVG rendering.
//!
//! All intersection predicates are orientation determinants over Q(√2);
//! there is no epsilon anywhere.

use crate::exactnum::QuadExt;
use crate::inversive::{CenterRadius, InvVec};
use crate::orthocubic::{Necklace, OrthoTangle};
use crate::packing::Color;
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum DiagramError {
    #[error("diagram is malformed: {0}")]
    Malformed(String),
    #[error("object is not projectable (half-spaces or coincident centers)")]
    NotProjectable,
    #[error("planar-diagram code needs closed components")]
    OpenStrand,
    #[error("state sum limited to 24 crossings, diagram has {0}")]
    TooManyCrossings(usize),
    #[error("need at least two components")]
    NotALink,
}

pub type Point = [QuadExt; 2];

#[derive(Debug, Clone)]
pub struct DiagVert {
    pub pos: Point,
    pub color: Option<Color>,
}

/// One strand of the diagram: a vertex sequence, closed or open.
#[derive(Debug, Clone)]
pub struct DiagComponent {
    pub verts: Vec<usize>,
    pub closed: bool,
}

/// A crossing between a black diagonal segment (over) and a white one.
#[derive(Debug, Clone)]
pub struct Crossing {
    pub point: Point,
    /// (component, segment index, parameter along the segment)
    pub over: (usize, usize, QuadExt),
    pub under: (usize, usize, QuadExt),
}

#[derive(Debug, Clone)]
pub struct CubicDiagram {
    pub verts: Vec<DiagVert>,
    pub components: Vec<DiagComponent>,
    pub crossings: Vec<Crossing>,
}

impl CubicDiagram {
    /// Segment endpoints (vertex ids) of segment `s` on component `c`.
    fn seg(&self, c: usize, s: usize) -> (usize, usize) {
        let comp = &self.components[c];
        let n = comp.verts.len();
        (comp.verts[s], comp.verts[(s + 1) % n])
    }

    fn seg_count(&self, c: usize) -> usize {
        let comp = &self.components[c];
        if comp.closed {
            comp.verts.len()
        } else {
            comp.verts.len() - 1
        }
    }
}

fn sub(a: &Point, b: &Point) -> Point {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

fn cross2(a: &Point, b: &Point) -> QuadExt {
    &(&a[0] * &b[1]) - &(&a[1] * &b[0])
}

/// Orientation of r relative to the directed line p→q: sign of the cross
/// product, exactly.
fn orient(p: &Point, q: &Point, r: &Point) -> i32 {
    cross2(&sub(q, p), &sub(r, p)).signum()
}

/// Proper interior intersection of segments ab and cd, with the exact
/// parameter along each; None when disjoint; an error for any degenerate
/// contact (collinear overlap, endpoint touching).
fn seg_intersection(
    a: &Point,
    b: &Point,
    c: &Point,
    d: &Point,
) -> Result<Option<(Point, QuadExt, QuadExt)>, DiagramError> {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 > 0 || o3 * o4 > 0 {
        return Ok(None);
    }
    if o1 == 0 || o2 == 0 || o3 == 0 || o4 == 0 {
        let touching = (o1 == 0 && on_segment(a, b, c))
            || (o2 == 0 && on_segment(a, b, d))
            || (o3 == 0 && on_segment(c, d, a))
            || (o4 == 0 && on_segment(c, d, b));
        if touching {
            return Err(DiagramError::Malformed(
                "segments touch at an endpoint or overlap".into(),
            ));
        }
        return Ok(None);
    }
    // proper crossing: solve a + t(b−a) = c + s(d−c)
    let r = sub(b, a);
    let s = sub(d, c);
    let denom = cross2(&r, &s);
    let t = cross2(&sub(c, a), &s).div_exact(&denom).unwrap();
    let u = cross2(&sub(c, a), &r).div_exact(&denom).unwrap();
    let point = [&a[0] + &(&t * &r[0]), &a[1] + &(&t * &r[1])];
    Ok(Some((point, t, u)))
}

fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    let within = |lo: &QuadExt, hi: &QuadExt, x: &QuadExt| {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        lo <= x && x <= hi
    };
    within(&a[0], &b[0], &p[0]) && within(&a[1], &b[1], &p[1])
}

fn project_sphere(v: &InvVec) -> Result<(Point, Option<Color>), DiagramError> {
    match v.center_radius() {
        Ok(CenterRadius::Sphere { center, .. }) => {
            let color = crate::packing::z_color(v).ok();
            Ok(([center[0].clone(), center[1].clone()], color))
        }
        _ => Err(DiagramError::NotProjectable),
    }
}

fn build_diagram(
    spheres: &[InvVec],
    colors_required: bool,
    comps: Vec<(Vec<usize>, bool)>,
) -> Result<CubicDiagram, DiagramError> {
    let mut verts = Vec::new();
    let mut seen: BTreeMap<Vec<QuadExt>, ()> = BTreeMap::new();
    for v in spheres {
        let (pos, color) = project_sphere(v)?;
        if colors_required && color.is_none() {
            return Err(DiagramError::Malformed(
                "section sphere centered on the cutting plane".into(),
            ));
        }
        let key = vec![pos[0].clone(), pos[1].clone()];
        if seen.insert(key, ()).is_some() {
            return Err(DiagramError::NotProjectable);
        }
        verts.push(DiagVert { pos, color });
    }
    let components: Vec<DiagComponent> = comps
        .into_iter()
        .map(|(verts, closed)| DiagComponent { verts, closed })
        .collect();
    let mut d = CubicDiagram {
        verts,
        components,
        crossings: Vec::new(),
    };
    find_crossings(&mut d)?;
    Ok(d)
}

/// A segment is diagonal when its endpoint spheres share a color; only a
/// black diagonal may cross a white one, black on top.
fn find_crossings(d: &mut CubicDiagram) -> Result<(), DiagramError> {
    let seg_color = |c: usize, s: usize| -> Option<Color> {
        let (a, b) = d.seg(c, s);
        match (d.verts[a].color, d.verts[b].color) {
            (Some(x), Some(y)) if x == y => Some(x),
            _ => None,
        }
    };
    let mut crossings = Vec::new();
    let all_segs: Vec<(usize, usize)> = (0..d.components.len())
        .flat_map(|c| (0..d.seg_count(c)).map(move |s| (c, s)))
        .collect();
    for i in 0..all_segs.len() {
        for j in (i + 1)..all_segs.len() {
            let (c1, s1) = all_segs[i];
            let (c2, s2) = all_segs[j];
            let (a1, b1) = d.seg(c1, s1);
            let (a2, b2) = d.seg(c2, s2);
            // segments sharing a vertex are consecutive strand pieces
            if a1 == a2 || a1 == b2 || b1 == a2 || b1 == b2 {
                continue;
            }
            let hit = seg_intersection(
                &d.verts[a1].pos,
                &d.verts[b1].pos,
                &d.verts[a2].pos,
                &d.verts[b2].pos,
            )?;
            let Some((point, t, u)) = hit else { continue };
            match (seg_color(c1, s1), seg_color(c2, s2)) {
                (Some(Color::Black), Some(Color::White)) => crossings.push(Crossing {
                    point,
                    over: (c1, s1, t),
                    under: (c2, s2, u),
                }),
                (Some(Color::White), Some(Color::Black)) => crossings.push(Crossing {
                    point,
                    over: (c2, s2, u),
                    under: (c1, s1, t),
                }),
                other => {
                    return Err(DiagramError::Malformed(format!(
                        "illegal intersection between segments of colors {other:?}"
                    )))
                }
            }
        }
    }
    d.crossings = crossings;
    Ok(())
}

/// Project a tangle: drop the z coordinate of every sphere center.
pub fn project_tangle(t: &OrthoTangle) -> Result<CubicDiagram, DiagramError> {
    let spheres: Vec<InvVec> = t.spheres.iter().map(|e| e.vec.clone()).collect();
    let mut comps: Vec<(Vec<usize>, bool)> = t
        .strands
        .iter()
        .map(|s| (s.ids.clone(), false))
        .collect();
    comps.extend(t.closed.iter().map(|c| (c.clone(), true)));
    build_diagram(&spheres, true, comps)
}

/// Project a necklace.
pub fn project_necklace(n: &Necklace) -> Result<CubicDiagram, DiagramError> {
    let comps = n.cycles.iter().map(|c| (c.clone(), true)).collect();
    build_diagram(&n.spheres, false, comps)
}

// ------------------------------------------------------------------
// Planar-diagram codes
// ------------------------------------------------------------------

/// One crossing as the counterclockwise 4-tuple of edge labels starting
/// from the incoming under-edge. `over_in_last` records whether the over
/// strand enters at the last slot (the positive crossing) or at the
/// second (negative).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PDCrossing {
    pub arcs: [usize; 4],
    pub over_in_last: bool,
}

impl PDCrossing {
    pub fn sign(&self) -> i64 {
        if self.over_in_last {
            1
        } else {
            -1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PDCode {
    pub crossings: Vec<PDCrossing>,
    /// total number of link components
    pub components: usize,
    /// components that meet no crossing at all
    pub free_loops: usize,
    /// component index of each edge label
    pub arc_component: BTreeMap<usize, usize>,
}

impl PDCode {
    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign()).sum()
    }

    pub fn empty(components: usize) -> PDCode {
        PDCode {
            crossings: Vec::new(),
            components,
            free_loops: components,
            arc_component: BTreeMap::new(),
        }
    }
}

/// Passage of a component through a crossing, ordered along the strand.
#[derive(Debug, Clone)]
struct Passage {
    comp: usize,
    seg: usize,
    t: QuadExt,
    crossing: usize,
    is_over: bool,
}

/// Extract the planar-diagram code of a closed diagram: walk every
/// component, starting a new edge label after each passage, and read each
/// crossing counterclockwise from its incoming under-edge. Every label
/// occurs exactly twice across the tuples.
pub fn pd_code(d: &CubicDiagram) -> Result<PDCode, DiagramError> {
    if d.components.iter().any(|c| !c.closed) {
        return Err(DiagramError::OpenStrand);
    }
    let mut passages: Vec<Passage> = Vec::new();
    for (ci, x) in d.crossings.iter().enumerate() {
        passages.push(Passage {
            comp: x.over.0,
            seg: x.over.1,
            t: x.over.2.clone(),
            crossing: ci,
            is_over: true,
        });
        passages.push(Passage {
            comp: x.under.0,
            seg: x.under.1,
            t: x.under.2.clone(),
            crossing: ci,
            is_over: false,
        });
    }
    // order passages along each component
    let mut per_comp: Vec<Vec<usize>> = vec![Vec::new(); d.components.len()];
    for (i, p) in passages.iter().enumerate() {
        per_comp[p.comp].push(i);
    }
    for list in &mut per_comp {
        list.sort_by(|&x, &y| {
            let (px, py) = (&passages[x], &passages[y]);
            px.seg.cmp(&py.seg).then_with(|| px.t.cmp(&py.t))
        });
    }

    // assign edge labels: the edge after passage k on a component is its
    // k-th label; the edge before it is the previous one, cyclically
    let mut edge_out: BTreeMap<usize, usize> = BTreeMap::new();
    let mut edge_in: BTreeMap<usize, usize> = BTreeMap::new();
    let mut arc_component: BTreeMap<usize, usize> = BTreeMap::new();
    let mut next_label = 1usize;
    let mut free_loops = 0usize;
    for (comp, list) in per_comp.iter().enumerate() {
        if list.is_empty() {
            free_loops += 1;
            continue;
        }
        let m = list.len();
        let labels: Vec<usize> = (0..m).map(|k| next_label + k).collect();
        next_label += m;
        for (k, &pi) in list.iter().enumerate() {
            edge_out.insert(pi, labels[k]);
            edge_in.insert(pi, labels[(k + m - 1) % m]);
            arc_component.insert(labels[k], comp);
        }
    }

    // per crossing: counterclockwise tuple from the incoming under edge
    let mut out = Vec::new();
    for ci in 0..d.crossings.len() {
        let (over_p, under_p) = {
            let mut o = None;
            let mut u = None;
            for (i, p) in passages.iter().enumerate() {
                if p.crossing == ci {
                    if p.is_over {
                        o = Some(i);
                    } else {
                        u = Some(i);
                    }
                }
            }
            (o.unwrap(), u.unwrap())
        };
        let dir = |pass: &Passage| -> Point {
            let (a, b) = d.seg(pass.comp, pass.seg);
            sub(&d.verts[b].pos, &d.verts[a].pos)
        };
        let under_dir = dir(&passages[under_p]);
        let over_dir = dir(&passages[over_p]);
        let under_in = edge_in[&under_p];
        let under_out = edge_out[&under_p];
        let over_in = edge_in[&over_p];
        let over_out = edge_out[&over_p];
        // rays out of the crossing point: incoming edges point backwards
        let back = |p: &Point| -> Point { [-&p[0], -&p[1]] };
        let rays = [
            (back(&under_dir), under_in, 0u8),
            (under_dir.clone(), under_out, 1),
            (back(&over_dir), over_in, 2),
            (over_dir.clone(), over_out, 3),
        ];
        // sort counterclockwise starting from the under-in ray
        let base = &rays[0].0;
        let half = |v: &Point| -> i32 {
            // 0: along base; 1: counterclockwise side; 2: opposite; 3: rest
            let cr = cross2(base, v);
            let dt = &(&base[0] * &v[0]) + &(&base[1] * &v[1]);
            match (cr.signum(), dt.signum()) {
                (0, 1) => 0,
                (1, _) => 1,
                (0, _) => 2,
                (-1, _) => 3,
                _ => unreachable!(),
            }
        };
        let mut order: Vec<usize> = (0..4).collect();
        order.sort_by(|&p, &q| {
            half(&rays[p].0)
                .cmp(&half(&rays[q].0))
                .then_with(|| cross2(&rays[q].0, &rays[p].0).signum().cmp(&0))
        });
        let start = order.iter().position(|&i| i == 0).unwrap();
        let tuple: Vec<usize> = (0..4).map(|k| order[(start + k) % 4]).collect();
        if tuple[2] != 1 {
            return Err(DiagramError::Malformed(
                "crossing rays do not alternate under/over".into(),
            ));
        }
        let arcs = [
            rays[tuple[0]].1,
            rays[tuple[1]].1,
            rays[tuple[2]].1,
            rays[tuple[3]].1,
        ];
        let over_in_slot = (0..4).find(|&k| rays[tuple[k]].2 == 2).unwrap();
        out.push(PDCrossing {
            arcs,
            over_in_last: over_in_slot == 3,
        });
    }
    Ok(PDCode {
        crossings: out,
        components: d.components.len(),
        free_loops,
        arc_component,
    })
}

// ------------------------------------------------------------------
// Kauffman bracket and Jones polynomial
// ------------------------------------------------------------------

/// Sparse Laurent polynomial with integer coefficients; the exponent unit
/// depends on context (A for the bracket, quarter powers of t for Jones).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    pub coeffs: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        LaurentPoly::mono(0, 1)
    }

    pub fn mono(exp: i64, coeff: i64) -> Self {
        let mut m = BTreeMap::new();
        if coeff != 0 {
            m.insert(exp, coeff);
        }
        LaurentPoly { coeffs: m }
    }

    pub fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (&e, &c) in &rhs.coeffs {
            let v = self.coeffs.entry(e).or_insert(0);
            *v += c;
            if *v == 0 {
                self.coeffs.remove(&e);
            }
        }
    }

    pub fn mul(&self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e1, &c1) in &self.coeffs {
            for (&e2, &c2) in &rhs.coeffs {
                let v = out.coeffs.entry(e1 + e2).or_insert(0);
                *v += c1 * c2;
                if *v == 0 {
                    out.coeffs.remove(&(e1 + e2));
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Difference between the largest and smallest exponent.
    pub fn span(&self) -> i64 {
        match (self.coeffs.keys().next(), self.coeffs.keys().last()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    /// Substitute the variable by its inverse (exponent negation).
    pub fn invert_variable(&self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (-e, c)).collect(),
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Kauffman bracket by the full state sum: over all smoothings,
/// A^(a−b)·δ^(loops−1) with δ = −A²−A⁻². Exponents are powers of A.
pub fn kauffman_bracket(pd: &PDCode) -> Result<LaurentPoly, DiagramError> {
    let n = pd.crossings.len();
    if n > 24 {
        return Err(DiagramError::TooManyCrossings(n));
    }
    let mut edge_ids: Vec<usize> = pd
        .crossings
        .iter()
        .flat_map(|c| c.arcs.iter().copied())
        .collect();
    edge_ids.sort_unstable();
    edge_ids.dedup();
    let idx: BTreeMap<usize, usize> = edge_ids.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let delta = {
        let mut d = LaurentPoly::mono(2, -1);
        d.add_assign(&LaurentPoly::mono(-2, -1));
        d
    };
    let mut total = LaurentPoly::zero();
    for state in 0u32..(1u32 << n) {
        let mut uf = UnionFind::new(edge_ids.len());
        let mut a_count: i64 = 0;
        for (i, x) in pd.crossings.iter().enumerate() {
            let [a, b, c, d] = x.arcs.map(|l| idx[&l]);
            if state & (1 << i) == 0 {
                // A-smoothing joins (a,b) and (c,d)
                a_count += 1;
                uf.union(a, b);
                uf.union(c, d);
            } else {
                uf.union(a, d);
                uf.union(b, c);
            }
        }
        let mut roots: Vec<usize> = (0..edge_ids.len()).map(|i| uf.find(i)).collect();
        roots.sort_unstable();
        roots.dedup();
        let loops = (roots.len() + pd.free_loops).max(1);
        let b_count = n as i64 - a_count;
        let term = LaurentPoly::mono(a_count - b_count, 1).mul(&delta.pow(loops as u32 - 1));
        total.add_assign(&term);
    }
    Ok(total)
}

/// Jones polynomial: (−A³)^(−w)·bracket, then A = t^(−1/4). Exponents in
/// the result are quarter powers of t.
pub fn jones(pd: &PDCode) -> Result<LaurentPoly, DiagramError> {
    let bracket = kauffman_bracket(pd)?;
    let w = pd.writhe();
    // (−A³)^(−w) = (−1)^w · A^(−3w)
    let sign = if w.rem_euclid(2) == 0 { 1 } else { -1 };
    let normalized = LaurentPoly::mono(-3 * w, sign).mul(&bracket);
    // A-exponent e becomes t-exponent −e/4, i.e. quarter-exponent −e
    Ok(LaurentPoly {
        coeffs: normalized.coeffs.iter().map(|(&e, &c)| (-e, c)).collect(),
    })
}

/// Half the signed sum of crossings between two distinct components.
pub fn linking_number(pd: &PDCode) -> Result<i64, DiagramError> {
    if pd.components < 2 {
        return Err(DiagramError::NotALink);
    }
    let mut sum = 0i64;
    for x in &pd.crossings {
        let under_comp = pd.arc_component[&x.arcs[0]];
        let over_slot = if x.over_in_last { 3 } else { 1 };
        let over_comp = pd.arc_component[&x.arcs[over_slot]];
        if under_comp != over_comp {
            sum += x.sign();
        }
    }
    Ok(sum / 2)
}

// ------------------------------------------------------------------
// Braid words
// ------------------------------------------------------------------

/// Planar-diagram code of the closure of a two-strand braid word
/// (true = positive generator). Built combinatorially with the same
/// conventions as the geometric extractor.
pub fn pd_from_braid_word(letters: &[bool]) -> Result<PDCode, DiagramError> {
    let n = letters.len();
    assert!(n >= 1);
    // edge (level, column): level i is the gap below crossing i; the
    // closure identifies level n with level 0
    let eid = |level: usize, col: usize| -> usize { 2 * level + col + 1 };
    let canon = |e: usize| -> usize {
        if e > 2 * n {
            e - 2 * n
        } else {
            e
        }
    };
    #[derive(Clone, Copy)]
    struct Pass {
        edge_in: usize,
        edge_out: usize,
    }
    let mut passes: Vec<Pass> = Vec::new();
    for (i, &positive) in letters.iter().enumerate() {
        let (in_l, in_r) = (eid(i, 0), eid(i, 1));
        let (out_l, out_r) = (eid(i + 1, 0), eid(i + 1, 1));
        // the left entrant exits right and vice versa
        let _ = positive;
        passes.push(Pass {
            edge_in: in_l,
            edge_out: out_r,
        });
        passes.push(Pass {
            edge_in: in_r,
            edge_out: out_l,
        });
    }
    // trace components over edges
    let mut next_pass: BTreeMap<usize, usize> = BTreeMap::new();
    for (pi, p) in passes.iter().enumerate() {
        next_pass.insert(canon(p.edge_in), pi);
    }
    let mut comp_of_edge: BTreeMap<usize, usize> = BTreeMap::new();
    let mut comp_count = 0usize;
    for start in [eid(0, 0), eid(0, 1)] {
        if comp_of_edge.contains_key(&start) {
            continue;
        }
        let mut e = start;
        loop {
            comp_of_edge.insert(e, comp_count);
            let pi = next_pass[&e];
            e = canon(passes[pi].edge_out);
            if e == start {
                break;
            }
        }
        comp_count += 1;
    }
    let mut crossings = Vec::new();
    for (i, &positive) in letters.iter().enumerate() {
        let (lp, rp) = (passes[2 * i], passes[2 * i + 1]);
        let (under, over) = if positive { (rp, lp) } else { (lp, rp) };
        let under_in = canon(under.edge_in);
        let under_out = canon(under.edge_out);
        let over_in = canon(over.edge_in);
        let over_out = canon(over.edge_out);
        // both strands travel upward; the counterclockwise order from the
        // incoming under-edge depends on the side the under strand enters
        let (arcs, over_in_last) = if positive {
            // under enters from the right: CCW = (in_r, out_r, out_l, in_l)
            ([under_in, over_out, under_out, over_in], true)
        } else {
            // under enters from the left: CCW = (in_l, in_r, out_r, out_l)
            ([under_in, over_in, under_out, over_out], false)
        };
        crossings.push(PDCrossing { arcs, over_in_last });
    }
    let mut arc_component = BTreeMap::new();
    for e in 1..=(2 * n) {
        arc_component.insert(canon(e), comp_of_edge[&canon(e)]);
    }
    Ok(PDCode {
        crossings,
        components: comp_count,
        free_loops: 0,
        arc_component,
    })
}

// ------------------------------------------------------------------
// SVG rendering
// ------------------------------------------------------------------

fn fmt_f(x: f64) -> String {
    format!("{x:.6}")
}

/// Deterministic SVG of a diagram over the base circle packing, with gaps
/// on the under-strand at each crossing.
pub fn render_svg(d: &CubicDiagram) -> String {
    let mut out = String::new();
    let scale = 60.0;
    let mut min_x = f64::MAX;
    let mut max_x = f64::MIN;
    let mut min_y = f64::MAX;
    let mut max_y = f64::MIN;
    let base = crate::packing::ctx();
    let mut bg = Vec::new();
    for v in base.cubic.spheres.values() {
        if let Ok(CenterRadius::Sphere { center, radius, .. }) = v.center_radius() {
            let (cx, cy, r) = (
                center[0].to_f64() * scale,
                -center[1].to_f64() * scale,
                radius.to_f64().abs() * scale,
            );
            min_x = min_x.min(cx - r);
            max_x = max_x.max(cx + r);
            min_y = min_y.min(cy - r);
            max_y = max_y.max(cy + r);
            bg.push(format!(
                "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n",
                fmt_f(cx),
                fmt_f(cy),
                fmt_f(r)
            ));
        }
    }
    let pt = |p: &Point| -> (f64, f64) { (p[0].to_f64() * scale, -p[1].to_f64() * scale) };
    for v in &d.verts {
        let (x, y) = pt(&v.pos);
        min_x = min_x.min(x - 6.0);
        max_x = max_x.max(x + 6.0);
        min_y = min_y.min(y - 6.0);
        max_y = max_y.max(y + 6.0);
    }
    let mut body = String::new();
    for c in 0..d.components.len() {
        for s in 0..d.seg_count(c) {
            let (a, b) = d.seg(c, s);
            let (x1, y1) = pt(&d.verts[a].pos);
            let (x2, y2) = pt(&d.verts[b].pos);
            // parameters where this segment passes under a crossing
            let mut cuts: Vec<f64> = d
                .crossings
                .iter()
                .filter(|x| x.under.0 == c && x.under.1 == s)
                .map(|x| x.under.2.to_f64())
                .collect();
            cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
            let gap = 0.12;
            let mut pieces = Vec::new();
            let mut t0 = 0.0;
            for t in cuts {
                pieces.push((t0, (t - gap).max(t0)));
                t0 = (t + gap).min(1.0);
            }
            pieces.push((t0, 1.0));
            for (p, q) in pieces {
                if q <= p {
                    continue;
                }
                let lerp = |u: f64| (x1 + (x2 - x1) * u, y1 + (y2 - y1) * u);
                let (ax, ay) = lerp(p);
                let (bx, by) = lerp(q);
                body.push_str(&format!(
                    "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#222222\" stroke-width=\"2.5\"/>\n",
                    fmt_f(ax),
                    fmt_f(ay),
                    fmt_f(bx),
                    fmt_f(by)
                ));
            }
        }
    }
    for v in &d.verts {
        let (x, y) = pt(&v.pos);
        let fill = match v.color {
            Some(Color::Black) => "#111111",
            Some(Color::White) => "#ffffff",
            None => "#888888",
        };
        body.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"{fill}\" stroke=\"#111111\" stroke-width=\"1.5\"/>\n",
            fmt_f(x),
            fmt_f(y)
        ));
    }
    let pad = 10.0;
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        fmt_f(min_x - pad),
        fmt_f(min_y - pad),
        fmt_f(max_x - min_x + 2.0 * pad),
        fmt_f(max_y - min_y + 2.0 * pad)
    ));
    for b in bg {
        out.push_str(&b);
    }
    out.push_str(&body);
    out.push_str("</svg>\n");
    out
}

/// Deterministic SVG of a family of circles (orbit output).
pub fn render_circles_svg(circles: &[InvVec]) -> String {
    let scale = 60.0;
    let mut min_x = f64::MAX;
    let mut max_x = f64::MIN;
    let mut min_y = f64::MAX;
    let mut max_y = f64::MIN;
    let mut body = String::new();
    for v in circles {
        if let Ok(CenterRadius::Sphere { center, radius, .. }) = v.center_radius() {
            let (cx, cy) = (center[0].to_f64() * scale, -center[1].to_f64() * scale);
            let r = radius.to_f64().abs() * scale;
            min_x = min_x.min(cx - r);
            max_x = max_x.max(cx + r);
            min_y = min_y.min(cy - r);
            max_y = max_y.max(cy + r);
            body.push_str(&format!(
                "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
                fmt_f(cx),
                fmt_f(cy),
                fmt_f(r)
            ));
        }
    }
    if body.is_empty() {
        min_x = 0.0;
        max_x = 1.0;
        min_y = 0.0;
        max_y = 1.0;
    }
    let pad = 10.0;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n{body}</svg>\n",
        fmt_f(min_x - pad),
        fmt_f(min_y - pad),
        fmt_f(max_x - min_x + 2.0 * pad),
        fmt_f(max_y - min_y + 2.0 * pad)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthocubic::{build, closure, conway, Built, ClosureKind};
    use crate::tangle::parse;

    fn necklace(src: &str) -> Necklace {
        match build(&parse(src).unwrap()).unwrap() {
            Built::Necklace(n) => n,
            _ => panic!("expected necklace"),
        }
    }

    fn jones_of(n: &Necklace) -> LaurentPoly {
        match &n.built_pd {
            Some(pd) => jones(pd).unwrap(),
            None => jones(&pd_code(&project_necklace(n).unwrap()).unwrap()).unwrap(),
        }
    }

    fn pd_of(n: &Necklace) -> PDCode {
        match &n.built_pd {
            Some(pd) => pd.clone(),
            None => pd_code(&project_necklace(n).unwrap()).unwrap(),
        }
    }

    // hand-encoded reference codes from standard minimal diagrams
    fn ref_trefoil() -> PDCode {
        PDCode {
            crossings: vec![
                PDCrossing { arcs: [1, 4, 2, 5], over_in_last: false },
                PDCrossing { arcs: [3, 6, 4, 1], over_in_last: false },
                PDCrossing { arcs: [5, 2, 6, 3], over_in_last: false },
            ],
            components: 1,
            free_loops: 0,
            arc_component: (1..=6).map(|a| (a, 0)).collect(),
        }
    }

    fn ref_figure_eight() -> PDCode {
        PDCode {
            crossings: vec![
                PDCrossing { arcs: [4, 2, 5, 1], over_in_last: true },
                PDCrossing { arcs: [8, 6, 1, 5], over_in_last: true },
                PDCrossing { arcs: [6, 3, 7, 4], over_in_last: false },
                PDCrossing { arcs: [2, 7, 3, 8], over_in_last: false },
            ],
            components: 1,
            free_loops: 0,
            arc_component: (1..=8).map(|a| (a, 0)).collect(),
        }
    }

    fn ref_hopf() -> PDCode {
        PDCode {
            crossings: vec![
                PDCrossing { arcs: [4, 1, 3, 2], over_in_last: false },
                PDCrossing { arcs: [2, 3, 1, 4], over_in_last: false },
            ],
            components: 2,
            free_loops: 0,
            arc_component: [(3, 0), (4, 0), (1, 1), (2, 1)].into_iter().collect(),
        }
    }

    #[test]
    fn bracket_of_empty_diagram() {
        let pd = PDCode::empty(1);
        assert_eq!(kauffman_bracket(&pd).unwrap(), LaurentPoly::one());
        assert_eq!(jones(&pd).unwrap(), LaurentPoly::one());
        let pd2 = PDCode::empty(2);
        let mut delta = LaurentPoly::mono(2, -1);
        delta.add_assign(&LaurentPoly::mono(-2, -1));
        assert_eq!(kauffman_bracket(&pd2).unwrap(), delta);
    }

    #[test]
    fn bracket_of_single_kink() {
        // positive kink: bracket −A³; Jones normalizes it away
        let pd = PDCode {
            crossings: vec![PDCrossing { arcs: [1, 1, 2, 2], over_in_last: true }],
            components: 1,
            free_loops: 0,
            arc_component: [(1, 0), (2, 0)].into_iter().collect(),
        };
        assert_eq!(kauffman_bracket(&pd).unwrap(), LaurentPoly::mono(3, -1));
        assert_eq!(jones(&pd).unwrap(), LaurentPoly::one());
        // negative kink: −A⁻³
        let pd = PDCode {
            crossings: vec![PDCrossing { arcs: [1, 2, 2, 1], over_in_last: false }],
            components: 1,
            free_loops: 0,
            arc_component: [(1, 0), (2, 0)].into_iter().collect(),
        };
        assert_eq!(kauffman_bracket(&pd).unwrap(), LaurentPoly::mono(-3, -1));
        assert_eq!(jones(&pd).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn reference_jones_values() {
        // left trefoil: Jones −t⁻⁴ + t⁻³ + t⁻¹ in quarter-exponents
        let j3 = jones(&ref_trefoil()).unwrap();
        let expect: BTreeMap<i64, i64> = [(-16, -1), (-12, 1), (-4, 1)].into_iter().collect();
        assert_eq!(j3.coeffs, expect);
        // figure-eight: t⁻² − t⁻¹ + 1 − t + t², amphichiral
        let j4 = jones(&ref_figure_eight()).unwrap();
        let expect: BTreeMap<i64, i64> =
            [(-8, 1), (-4, -1), (0, 1), (4, -1), (8, 1)].into_iter().collect();
        assert_eq!(j4.coeffs, expect);
        assert_eq!(j4, j4.invert_variable());
        // negative Hopf: linking −1
        assert_eq!(linking_number(&ref_hopf()).unwrap(), -1);
    }

    #[test]
    fn project_goldens() {
        let trefoil = necklace("N(t(3))");
        let d = project_necklace(&trefoil).unwrap();
        assert_eq!(d.crossings.len(), 3);
        assert_eq!(d.components.len(), 1);

        let unlink = necklace("N(t(0))");
        let d = project_necklace(&unlink).unwrap();
        assert_eq!(d.crossings.len(), 0);
        assert_eq!(d.components.len(), 2);

        let fig8 = necklace("N(t(2,2))");
        let d = project_necklace(&fig8).unwrap();
        assert_eq!(d.crossings.len(), 4);
        assert_eq!(d.components.len(), 1);
    }

    #[test]
    fn pd_arcs_appear_twice() {
        let trefoil = necklace("N(t(3))");
        let pd = pd_of(&trefoil);
        assert_eq!(pd.crossings.len(), 3);
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        for x in &pd.crossings {
            for a in x.arcs {
                *seen.entry(a).or_insert(0) += 1;
            }
        }
        assert_eq!(seen.len(), 6);
        for (&arc, &count) in &seen {
            assert_eq!(count, 2, "arc {arc}");
        }
    }

    #[test]
    fn built_trefoil_matches_reference() {
        let j = jones_of(&necklace("N(t(3))"));
        let r = jones(&ref_trefoil()).unwrap();
        assert!(j == r || j == r.invert_variable(), "{j:?} vs {r:?}");
    }

    #[test]
    fn built_figure_eight_matches_reference_exactly() {
        let j = jones_of(&necklace("N(t(2,2))"));
        let r = jones(&ref_figure_eight()).unwrap();
        assert_eq!(j, r);
    }

    #[test]
    fn built_hopf_linking() {
        let hopf = closure(&conway(&[2], true).unwrap(), ClosureKind::Numerator).unwrap();
        let pd = pd_of(&hopf);
        assert_eq!(pd.components, 2);
        assert_eq!(linking_number(&pd).unwrap().abs(), 1);
    }

    #[test]
    fn unlink_has_zero_linking() {
        let n = necklace("N(t(0))");
        let pd = pd_of(&n);
        assert_eq!(pd.components, 2);
        assert_eq!(linking_number(&pd).unwrap(), 0);
    }

    #[test]
    fn mirrored_trefoil_has_inverted_jones() {
        let j_pos = jones_of(&necklace("N(t(3))"));
        let j_neg = jones_of(&necklace("N(t(-3))"));
        assert_eq!(j_neg, j_pos.invert_variable());
        assert_ne!(j_neg, j_pos); // the trefoil is chiral
    }

    #[test]
    fn mirrored_clasp_has_opposite_linking() {
        let pos = necklace("D(t(1/2))");
        let neg = necklace("D(t(-1/2))");
        let lp = linking_number(&pd_of(&pos)).unwrap();
        let ln = linking_number(&pd_of(&neg)).unwrap();
        assert_eq!(lp.abs(), 1);
        assert_eq!(ln, -lp);
    }

    #[test]
    fn equal_slope_equal_jones() {
        // two coefficient lists of the same slope produce the same knot
        // through different pipelines
        let a = closure(&conway(&[2, -2, -3], false).unwrap(), ClosureKind::Numerator).unwrap();
        let b = closure(&conway(&[1, 1, 1, 3], true).unwrap(), ClosureKind::Numerator).unwrap();
        assert_eq!(jones_of(&a), jones_of(&b));
    }

    #[test]
    fn trefoil_three_routes_agree() {
        let reduced = jones_of(&necklace("N(t(3))"));
        let full = {
            let t = conway(&[3], false).unwrap();
            jones_of(&closure(&t, ClosureKind::Numerator).unwrap())
        };
        let braid = jones_of(&necklace("braid(\"aaa\")"));
        assert_eq!(reduced, full);
        assert!(braid == reduced || braid == reduced.invert_variable());
    }

    #[test]
    fn braid_linking_of_four_crossings() {
        let n = necklace("braid(\"aaaa\")");
        let pd = pd_of(&n);
        assert_eq!(pd.components, 2);
        assert_eq!(linking_number(&pd).unwrap().abs(), 2);
        // half-space closure of the same word is the same link
        let h = crate::orthocubic::braid_grid("aaaa", true).unwrap();
        let pdh = pd_of(&h);
        assert_eq!(linking_number(&pdh).unwrap(), linking_number(&pd).unwrap());
    }

    #[test]
    fn alternating_pretzel_bracket_span() {
        // an alternating 8-crossing diagram has bracket span 4·8
        let n = necklace("N(t(1/3) + t(1/2) + t(1/3))");
        let pd = pd_of(&n);
        let b = kauffman_bracket(&pd).unwrap();
        assert_eq!(b.span(), 32);
        // the mixed-sign pretzel is not alternating: strictly smaller span
        let m = necklace("N(t(1/3) + t(-1/2) + t(1/3))");
        let bm = kauffman_bracket(&pd_of(&m)).unwrap();
        assert!(bm.span() < 32, "span {}", bm.span());
    }

    #[test]
    fn crossing_counts_match_twist_totals() {
        for coeffs in [vec![1], vec![3], vec![2, 2], vec![2, 1, 2], vec![1, 1, 1, 3]] {
            let t = conway(&coeffs, true).unwrap();
            let d = project_tangle(&t).unwrap();
            let total: i64 = coeffs.iter().sum();
            assert_eq!(d.crossings.len() as i64, total, "{coeffs:?}");
        }
        for coeffs in [vec![2, -2, -3], vec![-2], vec![1, -2]] {
            let t = conway(&coeffs, false).unwrap();
            let d = project_tangle(&t).unwrap();
            let total: i64 = coeffs.iter().map(|a| a.abs()).sum();
            assert_eq!(d.crossings.len() as i64, total, "{coeffs:?}");
        }
    }

    #[test]
    fn svg_is_deterministic() {
        let n = necklace("N(t(3))");
        let d = project_necklace(&n).unwrap();
        let a = render_svg(&d);
        let b = render_svg(&d);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        // 12 strand vertices plus the 8 background circles
        assert_eq!(a.matches("<circle").count(), 20);
        // three crossings: under-edges split into extra pieces (a piece may
        // degenerate when the crossing sits close to a vertex)
        let n_lines = a.matches("<line").count();
        assert!(n_lines > 12 && n_lines <= 15, "{n_lines} lines");
    }
}

#[cfg(test)]
mod oracle_edge_tests {
    use super::*;
    use crate::orthocubic::{build, closure, elementary, ElementaryKind, add, Built, ClosureKind};
    use crate::tangle::parse;

    #[test]
    fn one_crossing_plus_vertical_closes_to_unknot() {
        // adding the vertical tangle changes nothing up to isotopy
        let t1 = elementary(ElementaryKind::One);
        let sum = add(&t1, &elementary(ElementaryKind::Infinity)).unwrap();
        let a = closure(&sum, ClosureKind::Numerator).unwrap();
        let b = closure(&t1, ClosureKind::Numerator).unwrap();
        let ja = jones(&pd_code(&project_necklace(&a).unwrap()).unwrap()).unwrap();
        let jb = jones(&pd_code(&project_necklace(&b).unwrap()).unwrap()).unwrap();
        assert_eq!(ja, LaurentPoly::one());
        assert_eq!(jb, LaurentPoly::one());
    }

    #[test]
    fn figure_eight_diagram_is_alternating() {
        let Built::Necklace(n) = build(&parse("N(t(2,2))").unwrap()).unwrap() else {
            panic!()
        };
        let d = project_necklace(&n).unwrap();
        // walk the single component: passages must alternate over/under
        let mut passages: Vec<(usize, QuadExt, bool)> = Vec::new();
        for x in &d.crossings {
            passages.push((x.over.1, x.over.2.clone(), true));
            passages.push((x.under.1, x.under.2.clone(), false));
        }
        passages.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        assert_eq!(passages.len(), 8);
        for w in passages.windows(2) {
            assert_ne!(w[0].2, w[1].2, "consecutive passages share parity");
        }
        assert_ne!(passages[0].2, passages.last().unwrap().2);
    }

    #[test]
    fn bracket_guards_state_sum_size() {
        let mut crossings = Vec::new();
        for i in 0..25usize {
            crossings.push(PDCrossing {
                arcs: [4 * i + 1, 4 * i + 2, 4 * i + 3, 4 * i + 4],
                over_in_last: true,
            });
        }
        let pd = PDCode {
            crossings,
            components: 1,
            free_loops: 0,
            arc_component: (1..=100).map(|a| (a, 0)).collect(),
        };
        assert!(matches!(
            kauffman_bracket(&pd),
            Err(DiagramError::TooManyCrossings(25))
        ));
    }

    #[test]
    fn linking_requires_two_components() {
        let Built::Necklace(n) = build(&parse("N(t(3))").unwrap()).unwrap() else {
            panic!()
        };
        let pd = pd_code(&project_necklace(&n).unwrap()).unwrap();
        assert!(matches!(linking_number(&pd), Err(DiagramError::NotALink)));
    }

    #[test]
    fn empty_diagram_renders_background_only() {
        let d = CubicDiagram {
            verts: Vec::new(),
            components: Vec::new(),
            crossings: Vec::new(),
        };
        let svg = render_svg(&d);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<circle").count(), 8);
        assert_eq!(svg.matches("<line").count(), 0);
        assert_eq!(svg, render_svg(&d));
    }

    #[test]
    fn pd_and_poly_json_shapes() {
        let Built::Necklace(n) = build(&parse("N(t(2))").unwrap()).unwrap() else {
            panic!()
        };
        let pd = pd_code(&project_necklace(&n).unwrap()).unwrap();
        let v = crate::json::pd_to_json(&pd);
        assert_eq!(v["components"], 2);
        assert_eq!(v["crossings"].as_array().unwrap().len(), 2);
        let j = jones(&pd).unwrap();
        let pj = crate::json::poly_to_json(&j);
        let o = pj.as_object().unwrap();
        assert!(!o.is_empty());
        for (k, c) in o {
            k.parse::<i64>().unwrap();
            assert!(c.as_i64().unwrap() != 0);
        }
    }
}
