//! The two fixed realizations this crate is built on: the cubic circle
//! packing (eight circles in the plane, six dual circles) and the
//! z-alternating orthoplicial sphere packing (eight spheres, sixteen dual
//! spheres), together with their antipodal labelling, signed-permutation
//! symmetries, the shift maps used by the tangle calculus, the morphism
//! from the planar group into the spatial one, and orbit enumeration.
//!
//! Labels follow the antipodal convention: vertex labels are nonzero
//! integers i with ī = −i the antipodal vertex; a facet is a set of d+1
//! pairwise non-antipodal vertex labels.

use crate::exactnum::QuadExt;
use crate::inversive::{inv_product, GeomError, InvVec, MobiusMap};
use crate::linalg::Mat;
use std::collections::BTreeMap;
use std::sync::OnceLock;

/// Canonical label-set key: sorted by axis (absolute value).
pub type LabelKey = Vec<i8>;

pub fn key(labels: &[i8]) -> LabelKey {
    let mut k: Vec<i8> = labels.to_vec();
    assert!(k.iter().all(|&l| l != 0));
    k.sort_by_key(|l| l.abs());
    k
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn flipped(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

/// z-coloring of a section sphere: black when centered above the cutting
/// plane {z = 0}, white below. The sign is exact: sign(z·bend-coordinate)
/// for bounded spheres, sign of the z-normal for half-spaces. A sphere
/// centered on the plane has no color.
pub fn z_color(s: &InvVec) -> Result<Color, GeomError> {
    if !s.is_sphere() {
        return Err(GeomError::NotASphere);
    }
    assert_eq!(s.dim(), 3);
    let b = s.bend();
    let zc = &s.coords()[2];
    let sign = if b.is_zero() {
        zc.signum()
    } else {
        zc.signum() * b.signum()
    };
    match sign {
        1 => Ok(Color::Black),
        -1 => Ok(Color::White),
        _ => Err(GeomError::OnCuttingPlane),
    }
}

/// One of the two fixed base packings with its dual arrangement.
///
/// For the cubic packing the circles are keyed by octahedron-facet triples
/// and the duals by single octahedron-vertex labels; for the orthoplicial
/// packing the spheres carry single orthoplex-vertex labels and the duals
/// orthoplex-facet 4-sets. In both cases the singleton-keyed family is the
/// cross-polytope frame that signed permutations act on.
#[derive(Debug, Clone)]
pub struct LabeledPacking {
    pub dim: usize,
    pub spheres: BTreeMap<LabelKey, InvVec>,
    pub duals: BTreeMap<LabelKey, InvVec>,
}

impl LabeledPacking {
    /// The singleton-labeled frame family (octahedron or orthoplex vertices).
    pub fn frame(&self) -> &BTreeMap<LabelKey, InvVec> {
        if self.dim == 2 {
            &self.duals
        } else {
            &self.spheres
        }
    }

    pub fn frame_sphere(&self, label: i8) -> &InvVec {
        &self.frame()[&vec![label]]
    }
}

/// A group element tracked as a generator word plus its matrix. Words are
/// non-canonical; equality of elements is equality of matrices.
#[derive(Debug, Clone)]
pub struct GroupElement {
    pub word: Vec<String>,
    pub map: MobiusMap,
}

/// A signed permutation of the axis labels 1..=n: `image[i-1]` is the
/// (signed) image of +i; −i maps to the negated image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPerm {
    pub image: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm {
            image: (1..=n as i8).collect(),
        }
    }

    /// Transposition (i j)(ī j̄), or with j = −i the bar swap (i ī).
    pub fn swap(n: usize, i: i8, j: i8) -> Self {
        let mut p = SignedPerm::identity(n);
        p.image[(i.abs() - 1) as usize] = if i > 0 { j } else { -j };
        if i.abs() != j.abs() {
            p.image[(j.abs() - 1) as usize] = if j > 0 { i } else { -i };
        }
        p
    }

    pub fn apply(&self, label: i8) -> i8 {
        let img = self.image[(label.abs() - 1) as usize];
        if label > 0 {
            img
        } else {
            -img
        }
    }

    pub fn apply_key(&self, k: &LabelKey) -> LabelKey {
        key(&k.iter().map(|&l| self.apply(l)).collect::<Vec<_>>())
    }

    /// self ∘ rhs (rhs applied first).
    pub fn compose(&self, rhs: &SignedPerm) -> SignedPerm {
        SignedPerm {
            image: (1..=self.image.len() as i8)
                .map(|i| self.apply(rhs.apply(i)))
                .collect(),
        }
    }
}

/// The cubic circle packing: four large circles of radius 1+√2 centered at
/// (±(1+√2), ±(1+√2)) and four small ones of radius √2−1 at
/// (±(√2−1), ±(√2−1)), with the six dual circles around the origin.
pub fn cubic_base() -> LabeledPacking {
    let one = QuadExt::one();
    let s2 = QuadExt::sqrt2();
    let big_r = &one + &s2;
    let small_r = &s2 - &one;
    let mut spheres = BTreeMap::new();
    for e1 in [1i8, -1] {
        for e2 in [1i8, -1] {
            for e3 in [1i8, -1] {
                let (scale, bend) = if e3 > 0 {
                    (big_r.clone(), small_r.clone()) // bend = 1/(1+√2) = √2−1
                } else {
                    (small_r.clone(), big_r.clone())
                };
                let c = [
                    &scale * &QuadExt::from_int(e1 as i64),
                    &scale * &QuadExt::from_int(e2 as i64),
                ];
                let v = InvVec::sphere_from_bend_center(&bend, &c).unwrap();
                spheres.insert(key(&[e1, 2 * e2, 3 * e3]), v);
            }
        }
    }
    let mut duals = BTreeMap::new();
    for (lbl, cx, cy) in [
        (1i8, s2.clone(), QuadExt::zero()),
        (-1i8, -&s2, QuadExt::zero()),
        (2i8, QuadExt::zero(), s2.clone()),
        (-2i8, QuadExt::zero(), -&s2),
    ] {
        duals.insert(
            key(&[lbl]),
            InvVec::sphere_from_bend_center(&one, &[cx, cy]).unwrap(),
        );
    }
    // The enclosing dual circle is oriented so that the non-incident base
    // circles get nonpositive products (exterior orientation); the inner
    // dual keeps the standard one.
    let c3 = InvVec::sphere_from_bend_center(&small_r, &[QuadExt::zero(), QuadExt::zero()])
        .unwrap()
        .flipped();
    let c3bar =
        InvVec::sphere_from_bend_center(&big_r, &[QuadExt::zero(), QuadExt::zero()]).unwrap();
    duals.insert(key(&[3]), c3);
    duals.insert(key(&[-3]), c3bar);
    LabeledPacking {
        dim: 2,
        spheres,
        duals,
    }
}

/// Color of a cubic base circle under the z-coloring of the section it
/// cuts out: black exactly when the label signs multiply to +1.
pub fn cubic_color(k: &LabelKey) -> Color {
    let parity: i32 = k.iter().map(|&l| if l > 0 { 1 } else { -1 }).product();
    if parity > 0 {
        Color::Black
    } else {
        Color::White
    }
}

/// Bend and center direction of each sphere of the z-alternating
/// orthoplicial packing. Positive labels sit above {z = 0}.
fn ortho_rows() -> Vec<(i8, QuadExt, [i64; 3])> {
    let small = QuadExt::from_parts(1, 1, 1, 2); // 1 + 1/√2
    let big = QuadExt::from_parts(1, 1, -1, 2); // 1 − 1/√2
    vec![
        (1, small.clone(), [1, -1, 1]),
        (2, small.clone(), [-1, 1, 1]),
        (3, big.clone(), [-1, -1, 1]),
        (4, big.clone(), [1, 1, 1]),
        (-1, big.clone(), [-1, 1, -1]),
        (-2, big.clone(), [1, -1, -1]),
        (-3, small.clone(), [1, 1, -1]),
        (-4, small, [-1, -1, -1]),
    ]
}

/// The z-alternating orthoplicial sphere packing with its sixteen dual
/// spheres (one per orthoplex facet), computed by [`dual_sphere`].
pub fn orthoplicial_base() -> LabeledPacking {
    let one = QuadExt::one();
    let s2 = QuadExt::sqrt2();
    let small_scale = &s2 - &one; // with bend 1+1/√2
    let big_scale = &one + &s2; // with bend 1−1/√2
    let small_bend = QuadExt::from_parts(1, 1, 1, 2);
    let mut spheres = BTreeMap::new();
    for (lbl, bend, dir) in ortho_rows() {
        let scale = if bend == small_bend {
            small_scale.clone()
        } else {
            big_scale.clone()
        };
        let c: Vec<QuadExt> = dir
            .iter()
            .map(|&e| &scale * &QuadExt::from_int(e))
            .collect();
        spheres.insert(
            key(&[lbl]),
            InvVec::sphere_from_bend_center(&bend, &c).unwrap(),
        );
    }
    let mut packing = LabeledPacking {
        dim: 3,
        spheres,
        duals: BTreeMap::new(),
    };
    let mut duals = BTreeMap::new();
    for e1 in [1i8, -1] {
        for e2 in [1i8, -1] {
            for e3 in [1i8, -1] {
                for e4 in [1i8, -1] {
                    let facet = key(&[e1, 2 * e2, 3 * e3, 4 * e4]);
                    let d = dual_sphere(&packing, &facet).unwrap();
                    duals.insert(facet, d);
                }
            }
        }
    }
    packing.duals = duals;
    packing
}

/// The sphere orthogonal to the d+1 frame spheres named by `facet`,
/// normalized to self-product 1 and oriented so that the remaining base
/// spheres have nonpositive product with it.
pub fn dual_sphere(p: &LabeledPacking, facet: &[i8]) -> Result<InvVec, GeomError> {
    let n = p.dim + 2;
    let fkey = key(facet);
    if fkey.len() != p.dim + 1 {
        return Err(GeomError::Singular(format!(
            "facet must have {} labels",
            p.dim + 1
        )));
    }
    // rows (Q v_i)^T, so row · D = <v_i, D>
    let mut rows = Vec::new();
    for &l in &fkey {
        let v = p.frame_sphere(l);
        let mut row: Vec<QuadExt> = v.coords().to_vec();
        let last = row.len() - 1;
        row[last] = -&row[last];
        rows.push(row);
    }
    let ns = Mat::from_rows(rows).nullspace();
    if ns.len() != 1 {
        return Err(GeomError::Singular(format!(
            "facet {:?}: nullspace dimension {}",
            fkey,
            ns.len()
        )));
    }
    let d0 = &ns[0];
    let norm = {
        let mut acc = QuadExt::zero();
        for x in &d0[..n - 1] {
            acc = &acc + &(x * x);
        }
        &acc - &(&d0[n - 1] * &d0[n - 1])
    };
    if !norm.is_positive() {
        return Err(GeomError::Singular(format!(
            "facet {fkey:?}: orthogonal companion is not sphere-like"
        )));
    }
    let scale = norm.sqrt_exact().ok_or_else(|| {
        GeomError::Singular(format!("facet {fkey:?}: norm not a square in Q(√2)"))
    })?;
    let coords: Vec<QuadExt> = d0.iter().map(|c| c.div_exact(&scale).unwrap()).collect();
    let mut d = InvVec::from_coords(p.dim, crate::inversive::Kind::Sphere, coords)?;
    let mut sign = 0i32;
    for v in p.spheres.values() {
        if v == &d || *v == d.flipped() {
            continue;
        }
        let s = inv_product(&d, v)?.signum();
        if s == 0 {
            continue;
        }
        if sign == 0 {
            sign = s;
        } else if sign != s {
            return Err(GeomError::Singular(format!(
                "facet {fkey:?}: inconsistent orientation signs"
            )));
        }
    }
    if sign > 0 {
        d = d.flipped();
    }
    Ok(d)
}

/// The matrix realizing a signed permutation of the frame labels: the
/// unique Möbius map with M·v_i = v_{σ(i)} for every frame sphere.
pub fn signed_perm_symmetry(
    p: &LabeledPacking,
    sigma: &SignedPerm,
) -> Result<MobiusMap, GeomError> {
    let n = p.dim + 2;
    let frame = p.frame();
    let labels: Vec<i8> = frame.keys().map(|k| k[0]).collect();
    // pick n linearly independent frame vectors by greedy elimination
    let mut chosen: Vec<i8> = Vec::new();
    let mut echelon: Vec<Vec<QuadExt>> = Vec::new();
    for &l in &labels {
        if chosen.len() == n {
            break;
        }
        let mut v = frame[&vec![l]].coords().to_vec();
        for e in &echelon {
            let pos = e.iter().position(|x| !x.is_zero()).unwrap();
            if !v[pos].is_zero() {
                let f = v[pos].div_exact(&e[pos]).unwrap();
                for i in 0..n {
                    let t = &f * &e[i];
                    v[i] = &v[i] - &t;
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            // store the reduced vector for elimination, remember the label
            echelon.push(v);
            chosen.push(l);
        }
    }
    if chosen.len() != n {
        return Err(GeomError::Singular("frame does not span".into()));
    }
    let col_mat = |apply_sigma: bool| -> Mat {
        let mut m = Mat::zeros(n, n);
        for (j, &l) in chosen.iter().enumerate() {
            let lbl = if apply_sigma { sigma.apply(l) } else { l };
            let v = frame[&vec![lbl]].coords();
            for i in 0..n {
                m[(i, j)] = v[i].clone();
            }
        }
        m
    };
    let v_mat = col_mat(false);
    let w_mat = col_mat(true);
    let vinv = v_mat
        .inverse()
        .ok_or_else(|| GeomError::Singular("frame subset singular".into()))?;
    let map = MobiusMap::from_mat(p.dim, w_mat.mul(&vinv))?;
    for &l in &labels {
        let img = map.apply(frame_vec(frame, l))?;
        if &img != frame_vec(frame, sigma.apply(l)) {
            return Err(GeomError::Singular(format!(
                "signed permutation is not a packing symmetry at label {l}"
            )));
        }
    }
    Ok(map)
}

fn frame_vec(frame: &BTreeMap<LabelKey, InvVec>, l: i8) -> &InvVec {
    &frame[&vec![l]]
}

/// Generators of the planar full symmetry group used in words; the spatial
/// images are fixed by the section morphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubicGen {
    /// signed permutation (1 2)(1̄ 2̄)
    R12,
    /// signed permutation (2 3)(2̄ 3̄)
    R23,
    /// bar swap (3 3̄)
    R33,
    /// inversion through the dual circle with label 1
    S1,
}

impl CubicGen {
    pub fn name(self) -> &'static str {
        match self {
            CubicGen::R12 => "r12",
            CubicGen::R23 => "r23",
            CubicGen::R33 => "r33~",
            CubicGen::S1 => "s1",
        }
    }
}

/// Words for symmetries that are not generators, written over the four
/// generators. Validated against directly constructed matrices in tests.
pub mod words {
    use super::CubicGen::{self, R12, R23, R33, S1};

    pub fn r13() -> Vec<CubicGen> {
        vec![R12, R23, R12]
    }

    pub fn r11() -> Vec<CubicGen> {
        let mut w = r13();
        w.push(R33);
        w.extend(r13());
        w
    }

    pub fn s1_bar() -> Vec<CubicGen> {
        let mut w = r11();
        w.push(S1);
        w.extend(r11());
        w
    }

    pub fn r1bar3() -> Vec<CubicGen> {
        let mut w = r11();
        w.extend(r13());
        w.extend(r11());
        w
    }

    pub fn s3() -> Vec<CubicGen> {
        let mut w = r13();
        w.push(S1);
        w.extend(r13());
        w
    }

    /// μ₊ = s₁ r₁₃ (rightmost applied first)
    pub fn mu_plus() -> Vec<CubicGen> {
        let mut w = vec![S1];
        w.extend(r13());
        w
    }

    /// μ₋ = s₁̄ r₁̄₃
    pub fn mu_minus() -> Vec<CubicGen> {
        let mut w = s1_bar();
        w.extend(r1bar3());
        w
    }

    /// ν = s₃ r₃₃̄
    pub fn nu() -> Vec<CubicGen> {
        let mut w = s3();
        w.push(R33);
        w
    }
}

/// Everything fixed once per process: base packings, generator matrices in
/// both dimensions, the shift maps, and the cutting plane.
pub struct Ctx {
    pub cubic: LabeledPacking,
    pub ortho: LabeledPacking,
    /// planar generator matrices
    cubic_gen: BTreeMap<&'static str, MobiusMap>,
    /// spatial images of the planar generators under the section morphism
    ortho_gen: BTreeMap<&'static str, MobiusMap>,
    pub mu_plus_2d: GroupElement,
    pub mu_minus_2d: GroupElement,
    pub nu_2d: GroupElement,
    pub mu_plus: GroupElement,
    pub mu_minus: GroupElement,
    pub nu: GroupElement,
    /// reflection in the plane {y = x}, the tangle flip
    pub flip3: MobiusMap,
    /// the cutting plane {z ≥ 0} as a sphere vector
    pub sigma_plane: InvVec,
}

static CTX: OnceLock<Ctx> = OnceLock::new();

pub fn ctx() -> &'static Ctx {
    CTX.get_or_init(build_ctx)
}

fn build_ctx() -> Ctx {
    let cubic = cubic_base();
    let ortho = orthoplicial_base();

    let mut cubic_gen = BTreeMap::new();
    cubic_gen.insert(
        "r12",
        signed_perm_symmetry(&cubic, &SignedPerm::swap(3, 1, 2)).unwrap(),
    );
    cubic_gen.insert(
        "r23",
        signed_perm_symmetry(&cubic, &SignedPerm::swap(3, 2, 3)).unwrap(),
    );
    cubic_gen.insert(
        "r33~",
        signed_perm_symmetry(&cubic, &SignedPerm::swap(3, 3, -3)).unwrap(),
    );
    cubic_gen.insert(
        "s1",
        MobiusMap::inversion(&cubic.duals[&vec![1]]).unwrap(),
    );

    let mut ortho_gen = BTreeMap::new();
    ortho_gen.insert(
        "r12",
        signed_perm_symmetry(&ortho, &SignedPerm::swap(4, 1, 2)).unwrap(),
    );
    ortho_gen.insert(
        "r23",
        signed_perm_symmetry(&ortho, &SignedPerm::swap(4, 2, 3)).unwrap(),
    );
    // r₃₃̄ maps to the product of the signed permutations (1 2̄)(1̄ 2) and
    // (3 4̄)(3̄ 4); they commute, so the product is itself a signed
    // permutation of the orthoplex frame.
    let sigma_r33 = SignedPerm::swap(4, 1, -2).compose(&SignedPerm::swap(4, 3, -4));
    ortho_gen.insert("r33~", signed_perm_symmetry(&ortho, &sigma_r33).unwrap());
    ortho_gen.insert(
        "s1",
        MobiusMap::inversion(&ortho.duals[&key(&[1, -2, -3, 4])]).unwrap(),
    );

    let word_elem = |gens: &BTreeMap<&'static str, MobiusMap>,
                     dim: usize,
                     w: &[CubicGen]|
     -> GroupElement {
        let mut m = MobiusMap::identity(dim);
        for g in w {
            m = m.compose(&gens[g.name()]);
        }
        GroupElement {
            word: w.iter().map(|g| g.name().to_string()).collect(),
            map: m,
        }
    };

    let mu_plus_2d = word_elem(&cubic_gen, 2, &words::mu_plus());
    let mu_minus_2d = word_elem(&cubic_gen, 2, &words::mu_minus());
    let nu_2d = word_elem(&cubic_gen, 2, &words::nu());
    let mu_plus = word_elem(&ortho_gen, 3, &words::mu_plus());
    let mu_minus = word_elem(&ortho_gen, 3, &words::mu_minus());
    let nu = word_elem(&ortho_gen, 3, &words::nu());

    let flip3 = ortho_gen["r12"].clone();
    let sigma_plane = InvVec::halfspace(
        &[QuadExt::zero(), QuadExt::zero(), QuadExt::one()],
        &QuadExt::zero(),
    )
    .unwrap();

    Ctx {
        cubic,
        ortho,
        cubic_gen,
        ortho_gen,
        mu_plus_2d,
        mu_minus_2d,
        nu_2d,
        mu_plus,
        mu_minus,
        nu,
        flip3,
        sigma_plane,
    }
}

impl Ctx {
    pub fn ortho_sphere(&self, label: i8) -> &InvVec {
        &self.ortho.spheres[&vec![label]]
    }

    pub fn cubic_circle(&self, labels: &[i8]) -> &InvVec {
        &self.cubic.spheres[&key(labels)]
    }

    pub fn cubic_gen(&self, g: CubicGen) -> &MobiusMap {
        &self.cubic_gen[g.name()]
    }

    pub fn ortho_gen(&self, g: CubicGen) -> &MobiusMap {
        &self.ortho_gen[g.name()]
    }

    /// Matrix of a word over the planar generators, in the plane.
    pub fn cubic_word(&self, w: &[CubicGen]) -> GroupElement {
        let mut m = MobiusMap::identity(2);
        for g in w {
            m = m.compose(&self.cubic_gen[g.name()]);
        }
        GroupElement {
            word: w.iter().map(|g| g.name().to_string()).collect(),
            map: m,
        }
    }

    /// The section morphism: generator-wise image of a planar word in the
    /// spatial group.
    pub fn phi(&self, w: &[CubicGen]) -> GroupElement {
        let mut m = MobiusMap::identity(3);
        for g in w {
            m = m.compose(&self.ortho_gen[g.name()]);
        }
        GroupElement {
            word: w.iter().map(|g| format!("phi({})", g.name())).collect(),
            map: m,
        }
    }
}

/// The planar shift maps (μ₊, μ₋, ν).
pub fn cubic_shifts() -> (&'static GroupElement, &'static GroupElement, &'static GroupElement) {
    let c = ctx();
    (&c.mu_plus_2d, &c.mu_minus_2d, &c.nu_2d)
}

/// The spatial shift maps (μ̂₊, μ̂₋, ν̂), images of the planar ones under
/// the section morphism.
pub fn orthocubic_shifts(
) -> (&'static GroupElement, &'static GroupElement, &'static GroupElement) {
    let c = ctx();
    (&c.mu_plus, &c.mu_minus, &c.nu)
}

/// Breadth-first closure of the seed spheres under the given maps, up to
/// word length `depth`, deduplicated by exact coordinates and returned in
/// deterministic (lexicographic) order.
pub fn orbit(seeds: &[InvVec], generators: &[&MobiusMap], depth: usize) -> Vec<InvVec> {
    let mut seen: std::collections::BTreeSet<Vec<QuadExt>> = std::collections::BTreeSet::new();
    let mut frontier: Vec<InvVec> = Vec::new();
    for s in seeds {
        if seen.insert(s.coords().to_vec()) {
            frontier.push(s.clone());
        }
    }
    for _ in 0..depth {
        let mut next = Vec::new();
        for v in &frontier {
            for g in generators {
                let img = g.apply(v).expect("orbit generator dimension mismatch");
                if seen.insert(img.coords().to_vec()) {
                    next.push(img);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let mut out: Vec<InvVec> = Vec::new();
    let mut all: Vec<Vec<QuadExt>> = seen.into_iter().collect();
    all.sort();
    for coords in all {
        out.push(InvVec::from_coords(seeds[0].dim(), seeds[0].kind(), coords).unwrap());
    }
    out
}


#[cfg(test)]
mod shift_color_tests {
    use super::*;

    #[test]
    fn horizontal_shifts_preserve_colors_vertical_reverses() {
        let c = ctx();
        let mut moved_checked = 0;
        for v in c.ortho.spheres.values() {
            for m in [&c.mu_plus.map, &c.mu_minus.map] {
                let img = m.apply(v).unwrap();
                assert_eq!(z_color(&img).unwrap(), z_color(v).unwrap());
                if &img != v {
                    moved_checked += 1;
                }
            }
            let img = c.nu.map.apply(v).unwrap();
            assert_eq!(z_color(&img).unwrap(), z_color(v).unwrap().flipped());
        }
        assert!(moved_checked > 0);
        // depth-two orbit spheres behave the same way
        let gens = [&c.mu_plus.map, &c.mu_minus.map];
        let seeds: Vec<InvVec> = c.ortho.spheres.values().cloned().collect();
        for v in orbit(&seeds, &gens, 2) {
            for m in [&c.mu_plus.map, &c.mu_minus.map] {
                let img = m.apply(&v).unwrap();
                assert_eq!(z_color(&img).unwrap(), z_color(&v).unwrap());
            }
        }
    }
}
