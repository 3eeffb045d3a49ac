//! Projective line arrangements over `Q(zeta_n)` with a chosen embedding:
//! exact intersection lattices, projectivities, complex conjugation, and the
//! built-in 11- and 12-line arrangements.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::combinatorics::Combinatorics;
use crate::cyclotomic::{CycError, CycNum, Embedding, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArrError {
    ZeroLine,
    /// Two lines with the same canonical coefficients (1-based labels).
    DuplicateLines(usize, usize),
    SingularMatrix,
    /// `extend_with_l12`: the candidate line hits an existing point it must
    /// avoid; the payload is that point's line set.
    NonGenericBeta(Vec<usize>),
    UnknownName(String),
    Field(CycError),
}

impl fmt::Display for ArrError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrError::ZeroLine => write!(f, "all three line coefficients are zero"),
            ArrError::DuplicateLines(a, b) => {
                write!(f, "lines {a} and {b} coincide")
            }
            ArrError::SingularMatrix => write!(f, "projectivity matrix is singular"),
            ArrError::NonGenericBeta(p) => {
                write!(f, "candidate line passes through the existing point {p:?}")
            }
            ArrError::UnknownName(s) => write!(f, "unknown built-in arrangement `{s}`"),
            ArrError::Field(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ArrError {}

impl From<CycError> for ArrError {
    fn from(e: CycError) -> ArrError {
        ArrError::Field(e)
    }
}

/// A projective line `ax + by + cz = 0`, stored in canonical form: the first
/// nonzero coefficient is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjLine {
    coeffs: [CycNum; 3],
}

impl ProjLine {
    pub fn new(a: CycNum, b: CycNum, c: CycNum) -> Result<ProjLine, ArrError> {
        let coeffs = canonical_first(&[a, b, c])?;
        Ok(ProjLine { coeffs })
    }

    pub fn coeffs(&self) -> &[CycNum; 3] {
        &self.coeffs
    }

    /// Value of the defining form at a point (zero iff incident).
    pub fn eval(&self, p: &ProjPoint) -> CycNum {
        let mut acc = CycNum::zero(self.coeffs[0].order());
        for (c, x) in self.coeffs.iter().zip(p.coords.iter()) {
            acc = acc.add(&c.mul(x));
        }
        acc
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.eval(p).is_zero()
    }
}

/// A projective point, canonically scaled so the last nonzero coordinate
/// is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjPoint {
    coords: [CycNum; 3],
}

impl ProjPoint {
    pub fn new(x: CycNum, y: CycNum, z: CycNum) -> Result<ProjPoint, ArrError> {
        let coords = canonical_last(&[x, y, z])?;
        Ok(ProjPoint { coords })
    }

    pub fn coords(&self) -> &[CycNum; 3] {
        &self.coords
    }
}

/// Scale so the first nonzero entry is 1.
fn canonical_first(v: &[CycNum; 3]) -> Result<[CycNum; 3], ArrError> {
    let lead = v.iter().find(|c| !c.is_zero()).ok_or(ArrError::ZeroLine)?;
    let inv = lead.inverse()?;
    Ok([v[0].mul(&inv), v[1].mul(&inv), v[2].mul(&inv)])
}

/// Scale so the last nonzero entry is 1.
fn canonical_last(v: &[CycNum; 3]) -> Result<[CycNum; 3], ArrError> {
    let lead = v
        .iter()
        .rev()
        .find(|c| !c.is_zero())
        .ok_or(ArrError::ZeroLine)?;
    let inv = lead.inverse()?;
    Ok([v[0].mul(&inv), v[1].mul(&inv), v[2].mul(&inv)])
}

/// The intersection point of two non-coincident lines: the cross product of
/// their coefficient vectors.
pub fn line_intersection(a: &ProjLine, b: &ProjLine) -> Result<ProjPoint, ArrError> {
    let u = &a.coeffs;
    let v = &b.coeffs;
    let x = u[1].mul(&v[2]).sub(&u[2].mul(&v[1]));
    let y = u[2].mul(&v[0]).sub(&u[0].mul(&v[2]));
    let z = u[0].mul(&v[1]).sub(&u[1].mul(&v[0]));
    ProjPoint::new(x, y, z).map_err(|_| ArrError::DuplicateLines(0, 0))
}

/// Exact 3x3 determinant of the three coefficient vectors; zero iff the
/// lines are concurrent (or two coincide).
pub fn det3(a: &ProjLine, b: &ProjLine, c: &ProjLine) -> CycNum {
    let m = [&a.coeffs, &b.coeffs, &c.coeffs];
    let mut acc = CycNum::zero(m[0][0].order());
    // Cofactor expansion along the first row.
    for (j, sign) in [(0usize, 1i64), (1, -1), (2, 1)] {
        let (j1, j2) = match j {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let minor = m[1][j1].mul(&m[2][j2]).sub(&m[1][j2].mul(&m[2][j1]));
        let term = m[0][j].mul(&minor);
        acc = if sign > 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// An ordered arrangement: lines with 1-based labels, plus the embedding
/// that places the coefficients in `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    lines: Vec<ProjLine>,
    embedding: Embedding,
    /// For the 12-line built-ins: the rational parameter of the added line.
    beta: Option<Rational>,
}

impl Arrangement {
    pub fn new(lines: Vec<ProjLine>, embedding: Embedding) -> Result<Arrangement, ArrError> {
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                if lines[i] == lines[j] {
                    return Err(ArrError::DuplicateLines(i + 1, j + 1));
                }
            }
        }
        Ok(Arrangement { lines, embedding, beta: None })
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn line(&self, label: usize) -> &ProjLine {
        &self.lines[label - 1]
    }

    pub fn n_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn embedding(&self) -> Embedding {
        self.embedding
    }

    /// `Some(beta)` when the arrangement was produced by [`extend_with_l12`].
    pub fn beta(&self) -> Option<&Rational> {
        self.beta.as_ref()
    }

    /// All pairwise intersections, grouped by exact coincidence, as a
    /// labelled combinatorics.
    pub fn intersection_lattice(&self) -> Result<Combinatorics, ArrError> {
        let n = self.lines.len();
        let mut points: Vec<(ProjPoint, Vec<usize>)> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let p = line_intersection(&self.lines[i], &self.lines[j])
                    .map_err(|_| ArrError::DuplicateLines(i + 1, j + 1))?;
                match points.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, labels)) => {
                        if !labels.contains(&(i + 1)) {
                            labels.push(i + 1);
                        }
                        if !labels.contains(&(j + 1)) {
                            labels.push(j + 1);
                        }
                    }
                    None => points.push((p, vec![i + 1, j + 1])),
                }
            }
        }
        Ok(Combinatorics::new(n, points.into_iter().map(|(_, l)| l)))
    }

    pub fn is_ordered_realization(&self, c: &Combinatorics) -> Result<bool, ArrError> {
        Ok(self.intersection_lattice()? == *c)
    }

    /// Image of the arrangement under the coordinate change `p -> M p`.
    /// Covectors transform by the adjugate: `l' = l . M^-1` up to scale.
    pub fn apply_projectivity(&self, m: &[[CycNum; 3]; 3]) -> Result<Arrangement, ArrError> {
        let det = mat_det(m);
        if det.is_zero() {
            return Err(ArrError::SingularMatrix);
        }
        let adj = adjugate(m);
        let lines = self
            .lines
            .iter()
            .map(|l| {
                let c = &l.coeffs;
                let mut out = [
                    CycNum::zero(c[0].order()),
                    CycNum::zero(c[0].order()),
                    CycNum::zero(c[0].order()),
                ];
                for (j, o) in out.iter_mut().enumerate() {
                    for (i, ci) in c.iter().enumerate() {
                        *o = o.add(&ci.mul(&adj[i][j]));
                    }
                }
                ProjLine::new(out[0].clone(), out[1].clone(), out[2].clone())
            })
            .collect::<Result<Vec<_>, _>>()?;
        Arrangement::new(lines, self.embedding)
    }

    /// The complex-conjugate arrangement: same coefficients, conjugate
    /// embedding.
    pub fn conjugate(&self) -> Arrangement {
        Arrangement {
            lines: self.lines.clone(),
            embedding: self.embedding.conjugate(),
            beta: self.beta.clone(),
        }
    }

    /// Relabel lines: new line `i` is old line `pi^-1(i)`, so the point
    /// through old lines `S` becomes the point through `pi(S)`.
    pub fn relabel(&self, pi: &crate::combinatorics::Permutation) -> Arrangement {
        let inv = pi.inverse();
        let lines = (1..=self.lines.len())
            .map(|i| self.lines[inv.image(i) - 1].clone())
            .collect();
        Arrangement {
            lines,
            embedding: self.embedding,
            beta: self.beta.clone(),
        }
    }
}

fn mat_det(m: &[[CycNum; 3]; 3]) -> CycNum {
    let mut acc = CycNum::zero(m[0][0].order());
    for (j, sign) in [(0usize, 1i64), (1, -1), (2, 1)] {
        let (j1, j2) = match j {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let minor = m[1][j1].mul(&m[2][j2]).sub(&m[1][j2].mul(&m[2][j1]));
        let term = m[0][j].mul(&minor);
        acc = if sign > 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Adjugate matrix: `M . adj(M) = det(M) . I`.
fn adjugate(m: &[[CycNum; 3]; 3]) -> [[CycNum; 3]; 3] {
    let cof = |r: usize, c: usize| -> CycNum {
        let rs: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cs: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        let minor = m[rs[0]][cs[0]]
            .mul(&m[rs[1]][cs[1]])
            .sub(&m[rs[0]][cs[1]].mul(&m[rs[1]][cs[0]]));
        if (r + c) % 2 == 0 {
            minor
        } else {
            minor.neg()
        }
    };
    // adj = transpose of the cofactor matrix.
    core::array::from_fn(|i| core::array::from_fn(|j| cof(j, i)))
}

/// Parse a 3x3 matrix of coefficient strings over `Q(zeta_n)`.
pub fn parse_matrix(rows: &[[&str; 3]; 3], n: u32) -> Result<[[CycNum; 3]; 3], CycError> {
    let mut out: Vec<[CycNum; 3]> = Vec::with_capacity(3);
    for r in rows {
        out.push([
            CycNum::parse(r[0], n)?,
            CycNum::parse(r[1], n)?,
            CycNum::parse(r[2], n)?,
        ]);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

/// The eleven defining equations, with `a` the chosen primitive 10th root.
///
/// ```text
/// L1: z        L2: x + y - z
/// L3: x        L4: y
/// L5: x - z    L6: y - z
/// L7: -a^3 x + z          L8: y - a z
/// L9: (a-1) x - y + z     L10: -a(a-1) x + y + a(a-1) z
/// L11: -a(a-1) x + y - a z
/// ```
fn eleven_lines() -> Result<Vec<ProjLine>, ArrError> {
    let n = 10;
    let zero = CycNum::zero(n);
    let one = CycNum::one(n);
    let a = CycNum::zeta(n);
    let a3 = CycNum::root_power(3, n);
    let am1 = a.sub(&one);
    let aam1 = a.mul(&am1);
    let rows: Vec<[CycNum; 3]> = vec![
        [zero.clone(), zero.clone(), one.clone()],
        [one.clone(), one.clone(), one.neg()],
        [one.clone(), zero.clone(), zero.clone()],
        [zero.clone(), one.clone(), zero.clone()],
        [one.clone(), zero.clone(), one.neg()],
        [zero.clone(), one.clone(), one.neg()],
        [a3.neg(), zero.clone(), one.clone()],
        [zero.clone(), one.clone(), a.neg()],
        [am1.clone(), one.neg(), one.clone()],
        [aam1.neg(), one.clone(), aam1.clone()],
        [aam1.neg(), one.clone(), a.neg()],
    ];
    rows.into_iter()
        .map(|[a, b, c]| ProjLine::new(a, b, c))
        .collect()
}

/// Append the line `x - beta z = 0` through `[0:1:0]`, requiring it to meet
/// every existing intersection point only at `[0:1:0]`.
pub fn extend_with_l12(a: &Arrangement, beta: &Rational) -> Result<Arrangement, ArrError> {
    let n = a.embedding().field_order();
    let new_line = ProjLine::new(
        CycNum::one(n),
        CycNum::zero(n),
        CycNum::from_rational(beta.clone(), n).neg(),
    )?;
    for l in &a.lines {
        if *l == new_line {
            return Err(ArrError::NonGenericBeta(vec![]));
        }
    }
    let apex = ProjPoint::new(CycNum::zero(n), CycNum::one(n), CycNum::zero(n))?;
    let lattice = a.intersection_lattice()?;
    let mut seen: Vec<ProjPoint> = Vec::new();
    for p in lattice.points() {
        let pt = line_intersection(a.line(p[0]), a.line(p[1]))?;
        if pt == apex {
            continue;
        }
        if new_line.contains(&pt) {
            return Err(ArrError::NonGenericBeta(p.clone()));
        }
        seen.push(pt);
    }
    let mut lines = a.lines.clone();
    lines.push(new_line);
    let mut out = Arrangement::new(lines, a.embedding)?;
    out.beta = Some(beta.clone());
    Ok(out)
}

/// The first `beta` in the fixed enumeration `2, 3, 1/2, 5, 7, 11, ...` that
/// passes the genericity check of [`extend_with_l12`].
pub fn extend_generically(a: &Arrangement) -> Result<Arrangement, ArrError> {
    let mut candidates: Vec<Rational> = vec![
        Rational::from_integer(2.into()),
        Rational::from_integer(3.into()),
        Rational::new(1.into(), 2.into()),
        Rational::from_integer(5.into()),
    ];
    for k in 6i64..64 {
        candidates.push(Rational::from_integer(k.into()));
    }
    for beta in candidates {
        match extend_with_l12(a, &beta) {
            Ok(ext) => return Ok(ext),
            Err(ArrError::NonGenericBeta(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(ArrError::NonGenericBeta(vec![]))
}

/// Built-in arrangements: `N+`, `N-`, `M+`, `M-` (eleven lines) and the
/// extended `FN+`, `FN-`, `FM+`, `FM-` (twelve lines).
pub fn builtin_arrangement(name: &str) -> Result<Arrangement, ArrError> {
    let (base, extended) = match name {
        "N+" | "N-" | "M+" | "M-" => (name, false),
        "FN+" => ("N+", true),
        "FN-" => ("N-", true),
        "FM+" => ("M+", true),
        "FM-" => ("M-", true),
        other => return Err(ArrError::UnknownName(String::from(other))),
    };
    let root_index = match base {
        "N+" => 3,
        "N-" => 7,
        "M+" => 1,
        _ => 9,
    };
    let emb = Embedding::new(10, root_index)?;
    let arr = Arrangement::new(eleven_lines()?, emb)?;
    if extended {
        extend_generically(&arr)
    } else {
        Ok(arr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{builtin_k, builtin_k12, Permutation};

    fn n_plus() -> Arrangement {
        builtin_arrangement("N+").unwrap()
    }

    #[test]
    fn two_axes_meet_once() {
        let n = 10;
        let e = Embedding::new(10, 1).unwrap();
        let lx = ProjLine::new(CycNum::one(n), CycNum::zero(n), CycNum::zero(n)).unwrap();
        let ly = ProjLine::new(CycNum::zero(n), CycNum::one(n), CycNum::zero(n)).unwrap();
        let a = Arrangement::new(vec![lx, ly], e).unwrap();
        let c = a.intersection_lattice().unwrap();
        assert_eq!(c.points(), &[vec![1, 2]]);
    }

    #[test]
    fn n_plus_realizes_k() {
        let a = n_plus();
        assert!(a.is_ordered_realization(&builtin_k()).unwrap());
    }

    #[test]
    fn all_builtins_realize_their_combinatorics() {
        for name in ["N+", "N-", "M+", "M-"] {
            let a = builtin_arrangement(name).unwrap();
            assert!(a.is_ordered_realization(&builtin_k()).unwrap(), "{name}");
        }
        for name in ["FN+", "FN-", "FM+", "FM-"] {
            let a = builtin_arrangement(name).unwrap();
            assert!(a.is_ordered_realization(&builtin_k12()).unwrap(), "{name}");
        }
    }

    #[test]
    fn quadruple_point_at_0_1_0() {
        // L1, L3, L5, L7 all vanish at [0:1:0].
        let a = n_plus();
        let n = 10;
        let apex =
            ProjPoint::new(CycNum::zero(n), CycNum::one(n), CycNum::zero(n)).unwrap();
        for l in [1, 3, 5, 7] {
            assert!(a.line(l).contains(&apex), "L{l}");
        }
        let sub = Arrangement::new(
            vec![
                a.line(1).clone(),
                a.line(3).clone(),
                a.line(5).clone(),
                a.line(7).clone(),
            ],
            a.embedding(),
        )
        .unwrap();
        let c = sub.intersection_lattice().unwrap();
        assert_eq!(c.points(), &[vec![1, 2, 3, 4]]);
    }

    #[test]
    fn swapped_labels_break_realization() {
        let a = n_plus();
        let swap = Permutation::from_cycles(11, &[&[1, 2]]).unwrap();
        let b = a.relabel(&swap);
        assert!(!b.is_ordered_realization(&builtin_k()).unwrap());
        // But the relabeled lattice is the relabeled combinatorics.
        assert_eq!(b.intersection_lattice().unwrap(), builtin_k().relabel(&swap));
    }

    #[test]
    fn det_oracle_agrees_with_grouping() {
        // For every triple: det == 0 iff some lattice point contains it.
        let a = n_plus();
        let c = a.intersection_lattice().unwrap();
        for i in 1..=11usize {
            for j in i + 1..=11 {
                for k in j + 1..=11 {
                    let d = det3(a.line(i), a.line(j), a.line(k));
                    let concurrent = c
                        .points()
                        .iter()
                        .any(|p| p.contains(&i) && p.contains(&j) && p.contains(&k));
                    assert_eq!(d.is_zero(), concurrent, "triple ({i},{j},{k})");
                }
            }
        }
    }

    #[test]
    fn conjugate_swaps_builtins() {
        let a = n_plus();
        let c = a.conjugate();
        assert_eq!(c, builtin_arrangement("N-").unwrap());
        assert_eq!(c.conjugate(), a);
        assert_eq!(
            builtin_arrangement("M+").unwrap().conjugate(),
            builtin_arrangement("M-").unwrap()
        );
    }

    #[test]
    fn projectivity_identity_and_inverse() {
        let n = 10;
        let a = n_plus();
        let id: [[CycNum; 3]; 3] = core::array::from_fn(|i| {
            core::array::from_fn(|j| {
                if i == j {
                    CycNum::one(n)
                } else {
                    CycNum::zero(n)
                }
            })
        });
        assert_eq!(a.apply_projectivity(&id).unwrap(), a);
        let m = parse_matrix(
            &[["0", "0", "1"], ["1", "1", "-1"], ["0", "1", "0"]],
            n,
        )
        .unwrap();
        let adj = adjugate(&m);
        let there = a.apply_projectivity(&m).unwrap();
        let back = there.apply_projectivity(&adj).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn projectivity_realizes_sigma() {
        // (x,y,z) -> (z, x+y-z, y) maps each line of N+ onto the line of a
        // Galois-conjugate arrangement; its ordered lattice is still K.
        let m = parse_matrix(
            &[["0", "0", "1"], ["1", "1", "-1"], ["0", "1", "0"]],
            10,
        )
        .unwrap();
        let img = n_plus().apply_projectivity(&m).unwrap();
        let sigma =
            Permutation::from_cycles(11, &[&[1, 3, 2, 4], &[5, 6], &[7, 9, 10, 8]]).unwrap();
        assert_eq!(
            img.intersection_lattice().unwrap(),
            builtin_k().relabel(&sigma)
        );
        assert!(img.is_ordered_realization(&builtin_k()).unwrap());
        // On the six Galois-fixed lines the map is exactly sigma.
        let a = n_plus();
        for l in 1..=6usize {
            assert_eq!(img.line(l), a.line(sigma.image(l)), "L{l}");
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = parse_matrix(
            &[["1", "0", "0"], ["1", "0", "0"], ["0", "0", "1"]],
            10,
        )
        .unwrap();
        assert_eq!(
            n_plus().apply_projectivity(&m).unwrap_err(),
            ArrError::SingularMatrix
        );
    }

    #[test]
    fn bad_beta_values() {
        let a = n_plus();
        // beta = 0 duplicates L3, beta = 1 duplicates L5.
        for bad in [0i64, 1] {
            let beta = Rational::from_integer(bad.into());
            assert!(matches!(
                extend_with_l12(&a, &beta),
                Err(ArrError::NonGenericBeta(_))
            ));
        }
    }

    #[test]
    fn beta_two_is_generic() {
        let ext = extend_with_l12(&n_plus(), &Rational::from_integer(2.into())).unwrap();
        assert!(ext.is_ordered_realization(&builtin_k12()).unwrap());
        let auto = extend_generically(&n_plus()).unwrap();
        assert_eq!(auto.beta(), Some(&Rational::from_integer(2.into())));
        assert_eq!(auto, ext);
    }

    #[test]
    fn unknown_builtin_name() {
        assert!(matches!(
            builtin_arrangement("X"),
            Err(ArrError::UnknownName(_))
        ));
    }

    #[test]
    fn duplicate_lines_rejected() {
        let n = 10;
        let l = ProjLine::new(CycNum::one(n), CycNum::zero(n), CycNum::zero(n)).unwrap();
        let l2 = ProjLine::new(CycNum::from_integer(2, n), CycNum::zero(n), CycNum::zero(n))
            .unwrap();
        let e = Embedding::new(10, 1).unwrap();
        assert_eq!(
            Arrangement::new(vec![l, l2], e).unwrap_err(),
            ArrError::DuplicateLines(1, 2)
        );
    }

    #[test]
    fn l7_canonical_form() {
        // -a^3 x + z scales to x - a^-3 z; a^-3 = -a^2 since a^5 = -1.
        let a = n_plus();
        let c = a.line(7).coeffs();
        assert_eq!(c[0], CycNum::one(10));
        assert!(c[1].is_zero());
        assert_eq!(c[2], CycNum::root_power(2, 10));
    }
}
