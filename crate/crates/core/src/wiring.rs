//! Braided wiring diagrams: affine charts, generic perturbation, singular
//! values, path construction, and certified event extraction.
//!
//! Everything geometric stays in the field. The path is piecewise linear with
//! waypoints in `Q(zeta_n)` (with `4 | n` so the field contains `i`), wire
//! positions along a segment are linear in the path parameter, and every
//! event parameter is a ratio of real field elements. Interval arithmetic is
//! used only to decide signs of elements already proven nonzero.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arrangement::Arrangement;
use crate::ball::Evaluator;
use crate::cyclotomic::{CycError, CycNum, Embedding, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WiringError {
    /// The chart does not send the chosen line to `z = 0`.
    ChartInfinity { label: usize },
    /// The chart sends a line other than the chosen one to infinity.
    ChartCollapse { label: usize },
    SingularChart,
    ZeroEpsilon,
    /// The perturbation created a coincidence; retry with smaller epsilon.
    EpsilonTooCoarse(String),
    /// Two wires coincide.
    DuplicateWires(usize, usize),
    /// A wire is vertical where a generic arrangement is required.
    VerticalWire(usize),
    /// The path passes too close to a degeneracy (tie at a waypoint,
    /// coincident event parameters, a stray intersection on the path);
    /// rebuilt with different path parameters.
    DegeneratePath(String),
    Field(CycError),
}

impl fmt::Display for WiringError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WiringError::ChartInfinity { label } => {
                write!(f, "chart does not send line {label} to infinity")
            }
            WiringError::ChartCollapse { label } => {
                write!(f, "chart sends line {label} to infinity as well")
            }
            WiringError::SingularChart => write!(f, "chart matrix is singular"),
            WiringError::ZeroEpsilon => write!(f, "perturbation epsilon must be nonzero"),
            WiringError::EpsilonTooCoarse(s) => write!(f, "epsilon too coarse: {s}"),
            WiringError::DuplicateWires(a, b) => write!(f, "wires {a} and {b} coincide"),
            WiringError::VerticalWire(l) => write!(f, "wire {l} is vertical"),
            WiringError::DegeneratePath(s) => write!(f, "degenerate path: {s}"),
            WiringError::Field(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for WiringError {}

impl From<CycError> for WiringError {
    fn from(e: CycError) -> WiringError {
        WiringError::Field(e)
    }
}

/// A non-vertical wire `y = m x + c`, keeping its original line label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wire {
    pub label: usize,
    pub slope: CycNum,
    pub intercept: CycNum,
}

/// An affine chart of an arrangement: the image of all lines except the one
/// sent to infinity, with vertical lines `x = v` tracked separately until
/// the arrangement is perturbed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineArrangement {
    pub wires: Vec<Wire>,
    pub verticals: Vec<(usize, CycNum)>,
    embedding: Embedding,
    pub infinity_label: usize,
}

impl AffineArrangement {
    pub fn embedding(&self) -> Embedding {
        self.embedding
    }

    pub fn field_order(&self) -> u32 {
        self.embedding.field_order()
    }

    pub fn is_generic(&self) -> bool {
        self.verticals.is_empty()
    }

    /// Shear `x -> x + eps y`: former verticals get slope `1/eps`, other
    /// slopes move slightly. Fails if some slope satisfies `1 + eps m = 0`.
    pub fn perturb_to_generic(&self, eps: &Rational) -> Result<AffineArrangement, WiringError> {
        use num_traits::Zero;
        if eps.is_zero() {
            return Err(WiringError::ZeroEpsilon);
        }
        let n = self.field_order();
        let eps_c = CycNum::from_rational(eps.clone(), n);
        let one = CycNum::one(n);
        let mut wires = Vec::with_capacity(self.wires.len() + self.verticals.len());
        for w in &self.wires {
            let denom = one.add(&eps_c.mul(&w.slope));
            if denom.is_zero() {
                return Err(WiringError::EpsilonTooCoarse(alloc::format!(
                    "wire {} becomes vertical",
                    w.label
                )));
            }
            wires.push(Wire {
                label: w.label,
                slope: w.slope.div(&denom)?,
                intercept: w.intercept.div(&denom)?,
            });
        }
        let inv_eps = CycNum::from_rational(eps.recip(), n);
        for (label, v) in &self.verticals {
            wires.push(Wire {
                label: *label,
                slope: inv_eps.clone(),
                intercept: v.mul(&inv_eps).neg(),
            });
        }
        wires.sort_by_key(|w| w.label);
        for a in 0..wires.len() {
            for b in a + 1..wires.len() {
                if wires[a].slope == wires[b].slope && wires[a].intercept == wires[b].intercept {
                    return Err(WiringError::DuplicateWires(wires[a].label, wires[b].label));
                }
            }
        }
        Ok(AffineArrangement {
            wires,
            verticals: vec![],
            embedding: self.embedding,
            infinity_label: self.infinity_label,
        })
    }

    /// Rotate the fiber coordinate, `y -> (1 + i q) y`. Pairwise differences
    /// scale by the same unit, so nodes and singular values are unchanged,
    /// but imaginary-part ties move; used to detach crossings that would
    /// otherwise coincide with a node.
    pub fn rotate_fibers(&self, q: &Rational) -> AffineArrangement {
        let n = self.field_order();
        let i_elem = CycNum::root_power(i64::from(n / 4), n);
        let rho = CycNum::one(n).add(&i_elem.scale(q));
        AffineArrangement {
            wires: self
                .wires
                .iter()
                .map(|w| Wire {
                    label: w.label,
                    slope: w.slope.mul(&rho),
                    intercept: w.intercept.mul(&rho),
                })
                .collect(),
            verticals: self.verticals.clone(),
            embedding: self.embedding,
            infinity_label: self.infinity_label,
        }
    }

    /// Distinct x-coordinates of the intersection points, each with the
    /// wires through it, sorted by certified (Re, Im). Fails when two
    /// distinct points share a fiber (the projection is not generic).
    pub fn singular_values(&self) -> Result<Vec<SingularValue>, WiringError> {
        if let Some((l, _)) = self.verticals.first() {
            return Err(WiringError::VerticalWire(*l));
        }
        let mut points: Vec<(CycNum, CycNum, Vec<usize>)> = Vec::new();
        let ws = &self.wires;
        for a in 0..ws.len() {
            for b in a + 1..ws.len() {
                let dm = ws[a].slope.sub(&ws[b].slope);
                let dc = ws[b].intercept.sub(&ws[a].intercept);
                if dm.is_zero() {
                    if dc.is_zero() {
                        return Err(WiringError::DuplicateWires(ws[a].label, ws[b].label));
                    }
                    continue;
                }
                let x = dc.div(&dm)?;
                let y = ws[a].slope.mul(&x).add(&ws[a].intercept);
                match points.iter_mut().find(|(px, _, _)| *px == x) {
                    Some((_, py, labels)) => {
                        if *py != y {
                            return Err(WiringError::EpsilonTooCoarse(alloc::format!(
                                "two intersection points share the fiber of wires {} and {}",
                                ws[a].label,
                                ws[b].label
                            )));
                        }
                        if !labels.contains(&ws[a].label) {
                            labels.push(ws[a].label);
                        }
                        if !labels.contains(&ws[b].label) {
                            labels.push(ws[b].label);
                        }
                    }
                    None => points.push((x, y, vec![ws[a].label, ws[b].label])),
                }
            }
        }
        let mut eval = Evaluator::new(self.embedding);
        // Insertion sort with the certified comparator.
        let mut sorted: Vec<(CycNum, CycNum, Vec<usize>)> = Vec::with_capacity(points.len());
        for p in points {
            let mut at = sorted.len();
            for (k, q) in sorted.iter().enumerate() {
                if eval.cmp_re_im(&p.0, &q.0) == Ordering::Less {
                    at = k;
                    break;
                }
            }
            sorted.insert(at, p);
        }
        Ok(sorted
            .into_iter()
            .map(|(x, _, mut wires)| {
                wires.sort_unstable();
                SingularValue { x, wires }
            })
            .collect())
    }
}

/// One fiber containing an intersection point: its x-coordinate and the
/// labels of the wires through the point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularValue {
    pub x: CycNum,
    pub wires: Vec<usize>,
}

/// The rotation `lambda = exp(i pi / 4)` chart from the construction that
/// sends `L5: x - z = 0` to infinity: on covectors,
/// `(a, b, c) -> (lambda (a + c), b, -c)`.
pub fn paper_chart() -> [[CycNum; 3]; 3] {
    let n = 40;
    let l = CycNum::root_power(5, n);
    let zero = CycNum::zero(n);
    [
        [l.clone(), zero.clone(), l],
        [zero.clone(), CycNum::one(n), zero.clone()],
        [zero.clone(), zero.clone(), CycNum::one(n).neg()],
    ]
}

/// A rational chart sending `L5: x - z = 0` to infinity.
pub fn standard_chart() -> [[CycNum; 3]; 3] {
    let n = 40;
    let zero = CycNum::zero(n);
    let one = CycNum::one(n);
    [
        [one.clone(), zero.clone(), one.clone()],
        [zero.clone(), one.clone(), zero.clone()],
        [one.clone(), zero.clone(), one.neg()],
    ]
}

/// An invertible chart sending the given line of `a` to infinity, built by
/// elimination from the identity.
pub fn chart_for_line(a: &Arrangement, infinity: usize) -> Result<[[CycNum; 3]; 3], WiringError> {
    let n = lcm(a.embedding().field_order(), 4);
    let l = a.line(infinity).coeffs();
    let l: Vec<CycNum> = l.iter().map(|c| c.lift_to(n)).collect::<Result<_, _>>()?;
    let p = (0..3)
        .find(|&k| !l[k].is_zero())
        .expect("projective line has a nonzero coefficient");
    // Row p of the identity is replaced so that row 3 picks out the line:
    // swap rows p and 2, then the swapped matrix sends l to a multiple of e3
    // after clearing: build M with third row mapping l to e3.
    let mut m: [[CycNum; 3]; 3] =
        core::array::from_fn(|i| core::array::from_fn(|j| if i == j { CycNum::one(n) } else { CycNum::zero(n) }));
    m.swap(p, 2);
    // After the swap, (M l)_3 = l_p != 0; clear the other two output rows.
    let lp_inv = l[p].inverse()?;
    for i in 0..2 {
        // (M l)_i is l of the original index the row came from.
        let coeff: CycNum = (0..3)
            .fold(CycNum::zero(n), |acc, j| acc.add(&m[i][j].mul(&l[j])));
        if coeff.is_zero() {
            continue;
        }
        let factor = coeff.mul(&lp_inv);
        for j in 0..3 {
            let t = m[2][j].mul(&factor);
            m[i][j] = m[i][j].sub(&t);
        }
    }
    Ok(m)
}

fn lcm(a: u32, b: u32) -> u32 {
    use num_integer::Integer;
    a.lcm(&b)
}

/// Express every line except `infinity` in the affine chart, applying the
/// chart to coefficient covectors and projecting `(x, y, z) -> (x/z, y/z)`.
/// The field is lifted so that it contains `i` (order divisible by 4).
pub fn to_affine(
    a: &Arrangement,
    infinity: usize,
    chart: &[[CycNum; 3]; 3],
) -> Result<AffineArrangement, WiringError> {
    let n = lcm(
        lcm(a.embedding().field_order(), chart[0][0].order()),
        4,
    );
    let embedding = a.embedding().lift_to(n)?;
    let chart: Vec<Vec<CycNum>> = chart
        .iter()
        .map(|row| row.iter().map(|c| c.lift_to(n)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    let mut images = Vec::new();
    for line in a.lines() {
        let lifted: Vec<CycNum> = line
            .coeffs()
            .iter()
            .map(|c| c.lift_to(n))
            .collect::<Result<_, _>>()?;
        let img: Vec<CycNum> = (0..3)
            .map(|i| {
                (0..3).fold(CycNum::zero(n), |acc, j| {
                    acc.add(&chart[i][j].mul(&lifted[j]))
                })
            })
            .collect();
        images.push(img);
    }
    // Validate the designated line before anything else so a chart that was
    // built for a different line reports that, not a stray collapse.
    match images.get(infinity.wrapping_sub(1)) {
        None => return Err(WiringError::ChartInfinity { label: infinity }),
        Some(img) => {
            if !(img[0].is_zero() && img[1].is_zero()) {
                return Err(WiringError::ChartInfinity { label: infinity });
            }
            if img[2].is_zero() {
                return Err(WiringError::SingularChart);
            }
        }
    }
    let mut wires = Vec::new();
    let mut verticals = Vec::new();
    for (idx, img) in images.iter().enumerate() {
        let label = idx + 1;
        if label == infinity {
            continue;
        }
        if img[0].is_zero() && img[1].is_zero() {
            return Err(WiringError::ChartCollapse { label });
        }
        if img[1].is_zero() {
            verticals.push((label, img[2].div(&img[0])?.neg()));
        } else {
            wires.push(Wire {
                label,
                slope: img[0].div(&img[1])?.neg(),
                intercept: img[2].div(&img[1])?.neg(),
            });
        }
    }
    Ok(AffineArrangement {
        wires,
        verticals,
        embedding,
        infinity_label: infinity,
    })
}

/// A piecewise-linear path: straight bridges through each singular value
/// with connectors detouring to one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSegment {
    pub z0: CycNum,
    pub z1: CycNum,
    /// The singular value at the segment midpoint, if this is a bridge.
    pub node: Option<SingularValue>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathNu {
    pub segments: Vec<PathSegment>,
}

impl PathNu {
    pub fn waypoints(&self) -> Vec<CycNum> {
        let mut out = Vec::new();
        for (k, s) in self.segments.iter().enumerate() {
            if k == 0 {
                out.push(s.z0.clone());
            }
            out.push(s.z1.clone());
        }
        out
    }

    pub fn start(&self) -> &CycNum {
        &self.segments[0].z0
    }

    pub fn end(&self) -> &CycNum {
        &self.segments[self.segments.len() - 1].z1
    }
}

/// Path shape parameters; `delta` is the bridge half-length, `height` the
/// detour offset, `below` the detour side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathOptions {
    pub delta: Rational,
    pub height: Rational,
    pub below: bool,
}

impl Default for PathOptions {
    fn default() -> PathOptions {
        PathOptions {
            delta: Rational::new(1.into(), 4.into()),
            height: Rational::new(1.into(), 2.into()),
            below: true,
        }
    }
}

/// Bridges `[s - delta, s + delta]` through each singular value in order,
/// joined by three-segment detours on the chosen side.
pub fn build_path(svals: &[SingularValue], n: u32, opts: &PathOptions) -> PathNu {
    let delta = CycNum::from_rational(opts.delta.clone(), n);
    let i_elem = CycNum::root_power(i64::from(n / 4), n);
    let h = CycNum::from_rational(opts.height.clone(), n);
    let off = if opts.below {
        i_elem.mul(&h).neg()
    } else {
        i_elem.mul(&h)
    };
    let mut segments = Vec::new();
    if svals.is_empty() {
        segments.push(PathSegment {
            z0: CycNum::from_integer(-1, n),
            z1: CycNum::from_integer(1, n),
            node: None,
        });
        return PathNu { segments };
    }
    let mut push = |z0: &CycNum, z1: &CycNum, node: Option<SingularValue>| {
        if z0 != z1 {
            segments.push(PathSegment {
                z0: z0.clone(),
                z1: z1.clone(),
                node,
            });
        }
    };
    for (k, s) in svals.iter().enumerate() {
        let bl = s.x.sub(&delta);
        let br = s.x.add(&delta);
        push(&bl, &br, Some(s.clone()));
        if let Some(next) = svals.get(k + 1) {
            let nl = next.x.sub(&delta);
            let a = br.add(&off);
            let b = nl.add(&off);
            push(&br, &a, None);
            push(&a, &b, None);
            push(&b, &nl, None);
        }
    }
    PathNu { segments }
}

/// One event of a wiring diagram; positions are 1-based from the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    /// `wires` meet in one point; the strand block starting at position `at`
    /// reverses.
    Node { at: usize, wires: Vec<usize> },
    /// Strands at positions `at`, `at + 1` exchange; positive sign means the
    /// descending strand passes over.
    Crossing {
        at: usize,
        sign: i8,
        over: usize,
        under: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiringDiagram {
    /// Wire labels top to bottom at the path start.
    pub initial_order: Vec<usize>,
    /// Wire labels front to back (decreasing `Re y`) at the path start. The
    /// basepoint closure arc of a cycle needs the depth order there.
    pub initial_depth: Vec<usize>,
    pub events: Vec<Event>,
    /// Wire labels top to bottom at the path end (= replay of the events,
    /// verified against an independent certified sort).
    pub final_order: Vec<usize>,
}

impl WiringDiagram {
    pub fn n_strands(&self) -> usize {
        self.initial_order.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Event> {
        self.events
            .iter()
            .filter(|e| matches!(e, Event::Node { .. }))
    }
}

/// Evaluation context: certified signs plus the constants that turn
/// `2 i Im z` into the real element `2 Im z`.
struct Ctx {
    eval: Evaluator,
    neg_i: CycNum,
}

impl Ctx {
    fn new(embedding: Embedding) -> Ctx {
        let n = embedding.field_order();
        assert!(n % 4 == 0, "field must contain i");
        Ctx {
            eval: Evaluator::new(embedding),
            neg_i: CycNum::root_power(i64::from(3 * (n / 4)), n),
        }
    }

    /// `2 Im z` as an exact real field element.
    fn im2(&self, z: &CycNum) -> CycNum {
        z.two_i_im().mul(&self.neg_i)
    }

    /// Certified sign of a real field element.
    fn sign(&mut self, r: &CycNum) -> i32 {
        if r.is_zero() {
            0
        } else {
            self.eval.sign_real_element(r)
        }
    }

    /// Order two wires at a point: `Greater` when `i` is above `j`
    /// (larger Im, ties by larger Re).
    fn cmp_above(&mut self, d: &CycNum) -> Result<Ordering, WiringError> {
        match self.sign(&self.im2(d)) {
            1 => Ok(Ordering::Greater),
            -1 => Ok(Ordering::Less),
            _ => match self.sign(&d.two_re()) {
                1 => Ok(Ordering::Greater),
                -1 => Ok(Ordering::Less),
                _ => Err(WiringError::DegeneratePath(String::from("wires tie at a waypoint"))),
            },
        }
    }
}

/// When `true`, the strand with the larger real y-value passes over at a
/// crossing. Fixed by matching the published crossing data end-to-end.
const OVER_LARGER_RE: bool = true;

struct Cross {
    /// Indices into the wire list, `i < j`; `d = y_i - y_j`.
    i: usize,
    j: usize,
    /// Event parameter as the exact fraction `num / den` in `[0, 1]`.
    num: CycNum,
    den: CycNum,
    s_den: i32,
    /// Certified sign of `Re d` at the event.
    s_re: i32,
}

/// Scale `a` and `b` by one positive rational so both end up with coprime
/// integer coefficients. Keeps `-b/a` and all signs intact while making the
/// later products cheap.
fn integerize2(a: CycNum, b: CycNum) -> (CycNum, CycNum) {
    let mut den_lcm = BigInt::one();
    let mut num_gcd = BigInt::zero();
    for c in a.coeffs().iter().chain(b.coeffs()) {
        if c.is_zero() {
            continue;
        }
        den_lcm = den_lcm.lcm(c.denom());
        num_gcd = num_gcd.gcd(c.numer());
    }
    if num_gcd.is_zero() || (num_gcd.is_one() && den_lcm.is_one()) {
        return (a, b);
    }
    let s = Rational::new(den_lcm, num_gcd);
    (a.scale(&s), b.scale(&s))
}

/// The wiring diagram of a generic affine arrangement along a path. Fails
/// with `DegeneratePath` when the path parameters must be retried.
pub fn wiring_diagram(
    aff: &AffineArrangement,
    nu: &PathNu,
) -> Result<WiringDiagram, WiringError> {
    if let Some((l, _)) = aff.verticals.first() {
        return Err(WiringError::VerticalWire(*l));
    }
    let ws = &aff.wires;
    let m = ws.len();
    let mut ctx = Ctx::new(aff.embedding);
    // Pairwise slope and intercept differences, indexed by (i, j), i < j.
    let mut dm = Vec::new();
    let mut dc = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            dm.push(ws[i].slope.sub(&ws[j].slope));
            dc.push(ws[i].intercept.sub(&ws[j].intercept));
        }
    }
    let pair_idx = |i: usize, j: usize| -> usize {
        debug_assert!(i < j);
        i * m - i * (i + 1) / 2 + (j - i - 1)
    };

    let order_at = |ctx: &mut Ctx, z: &CycNum| -> Result<Vec<usize>, WiringError> {
        let mut order: Vec<usize> = Vec::with_capacity(m);
        for i in 0..m {
            let mut at = order.len();
            for (k, &j) in order.iter().enumerate() {
                let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
                let p = pair_idx(a, b);
                let d = dm[p].mul(z).add(&dc[p]);
                let mut ord = ctx.cmp_above(&d)?;
                if flip {
                    ord = ord.reverse();
                }
                // `i` above `j`: insert before.
                if ord == Ordering::Greater {
                    at = k;
                    break;
                }
            }
            order.insert(at, i);
        }
        Ok(order)
    };

    let mut order = order_at(&mut ctx, nu.start())?;
    let initial_order: Vec<usize> = order.iter().map(|&i| ws[i].label).collect();

    // Depth (Re y) order at the basepoint, front first.
    let y_start: Vec<CycNum> = ws
        .iter()
        .map(|w| w.slope.mul(nu.start()).add(&w.intercept))
        .collect();
    let mut depth: Vec<usize> = Vec::with_capacity(m);
    for i in 0..m {
        let mut at = depth.len();
        for (k, &j) in depth.iter().enumerate() {
            match ctx.sign(&y_start[i].sub(&y_start[j]).two_re()) {
                1 => {
                    at = k;
                    break;
                }
                -1 => {}
                _ => {
                    return Err(WiringError::DegeneratePath(String::from(
                        "wires tie in depth at the basepoint",
                    )))
                }
            }
        }
        depth.insert(at, i);
    }
    let initial_depth: Vec<usize> = depth.iter().map(|&i| ws[i].label).collect();

    let mut events: Vec<Event> = Vec::new();

    for seg in &nu.segments {
        let dz = seg.z1.sub(&seg.z0);
        // Per-wire value at the segment start and its change along the
        // segment; pair differences then need no multiplications.
        let y0: Vec<CycNum> = ws
            .iter()
            .map(|w| w.slope.mul(&seg.z0).add(&w.intercept))
            .collect();
        let yd: Vec<CycNum> = ws.iter().map(|w| w.slope.mul(&dz)).collect();
        // Im and Re parts are linear, so take them per wire and form pair
        // differences by subtraction alone.
        let im0: Vec<CycNum> = y0.iter().map(|y| ctx.im2(y)).collect();
        let imd: Vec<CycNum> = yd.iter().map(|y| ctx.im2(y)).collect();
        let re0: Vec<CycNum> = y0.iter().map(CycNum::two_re).collect();
        let red: Vec<CycNum> = yd.iter().map(CycNum::two_re).collect();
        let mut crossings: Vec<Cross> = Vec::new();
        let mut node_pairs = 0usize;
        for i in 0..m {
            for j in i + 1..m {
                let r_a = imd[i].sub(&imd[j]);
                let r_b = im0[i].sub(&im0[j]);
                let (num, den, on_line) = if !r_a.is_zero() {
                    (r_b.neg(), r_a, false)
                } else if !r_b.is_zero() {
                    continue; // constant nonzero Im separation
                } else {
                    // Im d vanishes identically: track Re d instead; a zero
                    // of Re d is then a genuine intersection.
                    let q_a = red[i].sub(&red[j]);
                    let q_b = re0[i].sub(&re0[j]);
                    if q_a.is_zero() {
                        if q_b.is_zero() {
                            return Err(WiringError::DuplicateWires(
                                ws[i].label,
                                ws[j].label,
                            ));
                        }
                        continue;
                    }
                    (q_b.neg(), q_a, true)
                };
                // Scaling by a positive rational changes neither the signs
                // nor the event parameter `num / den`, so clear all
                // denominators once and stay over the integers from here on.
                let (num, den) = integerize2(num, den);
                let s_den = ctx.sign(&den);
                let s_num = ctx.sign(&num);
                if s_num * s_den <= 0 {
                    if s_num == 0 {
                        return Err(WiringError::DegeneratePath(String::from("event at segment start")));
                    }
                    continue; // parameter below 0
                }
                let s_end = ctx.sign(&den.sub(&num));
                if s_end * s_den <= 0 {
                    if s_end == 0 {
                        return Err(WiringError::DegeneratePath(String::from("event at segment end")));
                    }
                    continue; // parameter above 1
                }
                // Interior event. Is it a passage through a point?
                let re_num = if on_line {
                    CycNum::zero(num.order())
                } else {
                    let q_a = red[i].sub(&red[j]);
                    let q_b = re0[i].sub(&re0[j]);
                    q_a.mul(&num).add(&q_b.mul(&den))
                };
                if re_num.is_zero() {
                    // d = 0 at the parameter: must be this bridge's node.
                    let at_half = num.scale(&Rational::new(2.into(), 1.into())) == den;
                    let designated = seg.node.as_ref().is_some_and(|nd| {
                        nd.wires.contains(&ws[i].label) && nd.wires.contains(&ws[j].label)
                    });
                    if !(at_half && designated) {
                        return Err(WiringError::DegeneratePath(String::from(
                            "intersection point off a designated node",
                        )));
                    }
                    node_pairs += 1;
                    continue;
                }
                let s_re = ctx.sign(&re_num) * s_den;
                crossings.push(Cross { i, j, num, den, s_den, s_re });
            }
        }
        if let Some(nd) = &seg.node {
            let k = nd.wires.len();
            if node_pairs != k * (k - 1) / 2 {
                return Err(WiringError::DegeneratePath(String::from("node pairs unaccounted")));
            }
        } else if node_pairs != 0 {
            return Err(WiringError::DegeneratePath(String::from("node pairs on a connector")));
        }

        // Order the crossings along the segment; the node sits at 1/2.
        let frac_cmp = |ctx: &mut Ctx, a: &Cross, b: &Cross| -> Ordering {
            let lhs = a.num.mul(&b.den);
            let rhs = b.num.mul(&a.den);
            let s = ctx.sign(&lhs.sub(&rhs)) * a.s_den * b.s_den;
            s.cmp(&0)
        };
        let mut sorted: Vec<Cross> = Vec::with_capacity(crossings.len());
        for c in crossings {
            let mut at = sorted.len();
            for (k, q) in sorted.iter().enumerate() {
                match frac_cmp(&mut ctx, &c, q) {
                    Ordering::Less => {
                        at = k;
                        break;
                    }
                    Ordering::Equal => {
                        let disjoint =
                            c.i != q.i && c.i != q.j && c.j != q.i && c.j != q.j;
                        if !disjoint {
                            return Err(WiringError::DegeneratePath(String::from(
                                "coincident crossing parameters",
                            )));
                        }
                        // Commuting events: deterministic label order.
                        if (ws[c.i].label, ws[c.j].label) < (ws[q.i].label, ws[q.j].label) {
                            at = k;
                            break;
                        }
                    }
                    Ordering::Greater => {}
                }
            }
            sorted.insert(at, c);
        }

        // Split at the node parameter and replay.
        let node_pos = if let Some(nd) = &seg.node {
            let mut pos = sorted.len();
            for (k, c) in sorted.iter().enumerate() {
                // c.num / c.den vs 1/2
                let s = ctx.sign(&c.num.scale(&Rational::new(2.into(), 1.into())).sub(&c.den))
                    * c.s_den;
                if s == 0 {
                    return Err(WiringError::DegeneratePath(alloc::format!(
                        "crossing of wires {} and {} at the node parameter of {:?}",
                        ws[c.i].label,
                        ws[c.j].label,
                        nd.wires
                    )));
                }
                if s > 0 {
                    pos = k;
                    break;
                }
            }
            Some((pos, nd.clone()))
        } else {
            None
        };

        let replay_cross = |order: &mut Vec<usize>,
                                events: &mut Vec<Event>,
                                c: &Cross|
         -> Result<(), WiringError> {
            let pi = order.iter().position(|&w| w == c.i).unwrap();
            let pj = order.iter().position(|&w| w == c.j).unwrap();
            let (upper, lower) = if pi < pj { (pi, pj) } else { (pj, pi) };
            if lower != upper + 1 {
                return Err(WiringError::DegeneratePath(String::from("crossing strands not adjacent")));
            }
            // d = y_i - y_j; positive Re d means wire i is in front.
            let over_idx = if (c.s_re > 0) == OVER_LARGER_RE { c.i } else { c.j };
            let upper_idx = order[upper];
            let sign = if over_idx == upper_idx { 1 } else { -1 };
            let under_idx = if over_idx == c.i { c.j } else { c.i };
            events.push(Event::Crossing {
                at: upper + 1,
                sign,
                over: ws[over_idx].label,
                under: ws[under_idx].label,
            });
            order.swap(upper, lower);
            Ok(())
        };

        for (k, c) in sorted.iter().enumerate() {
            if let Some((pos, nd)) = &node_pos {
                if k == *pos {
                    apply_node(&mut order, &mut events, nd, ws)?;
                }
            }
            replay_cross(&mut order, &mut events, c)?;
        }
        if let Some((pos, nd)) = &node_pos {
            if *pos == sorted.len() {
                apply_node(&mut order, &mut events, nd, ws)?;
            }
        }
    }

    let final_claimed: Vec<usize> = order.iter().map(|&i| ws[i].label).collect();
    let independent = order_at(&mut ctx, nu.end())?;
    let final_order: Vec<usize> = independent.iter().map(|&i| ws[i].label).collect();
    if final_claimed != final_order {
        return Err(WiringError::DegeneratePath(String::from("event replay disagrees with endpoint order")));
    }
    Ok(WiringDiagram {
        initial_order,
        initial_depth,
        events,
        final_order,
    })
}

fn apply_node(
    order: &mut [usize],
    events: &mut Vec<Event>,
    nd: &SingularValue,
    ws: &[Wire],
) -> Result<(), WiringError> {
    let mut positions: Vec<usize> = Vec::new();
    for (p, &w) in order.iter().enumerate() {
        if nd.wires.contains(&ws[w].label) {
            positions.push(p);
        }
    }
    let top = positions[0];
    let bottom = positions[positions.len() - 1];
    if bottom - top + 1 != positions.len() {
        return Err(WiringError::DegeneratePath(String::from("node strands not contiguous")));
    }
    order[top..=bottom].reverse();
    events.push(Event::Node {
        at: top + 1,
        wires: nd.wires.clone(),
    });
    Ok(())
}

/// Chart selection for the full pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartKind {
    /// The rotation chart (only valid when `L5: x - z = 0` goes to infinity).
    Paper,
    /// The rational chart for the same line.
    Standard,
    /// A chart constructed from the line itself.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineOptions {
    pub chart: ChartKind,
    /// Perturbation starts at `-1/2^epsilon_start` and halves on failure.
    pub epsilon_start: u32,
    pub detour_below: bool,
}

impl Default for PipelineOptions {
    fn default() -> PipelineOptions {
        PipelineOptions {
            chart: ChartKind::Paper,
            epsilon_start: 3,
            detour_below: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericDiagram {
    /// Perturbed and fiber-rotated affine arrangement the diagram refers to.
    pub affine: AffineArrangement,
    pub epsilon: Rational,
    /// The `q` of the fiber rotation `1 + i q`.
    pub rotation: Rational,
    pub path: PathNu,
    pub diagram: WiringDiagram,
}

/// Full front half of the pipeline: chart, perturbation (with automatic
/// epsilon refinement), singular values, path (with automatic reshaping on
/// degeneracies), wiring diagram.
pub fn generic_diagram(
    a: &Arrangement,
    infinity: usize,
    opts: &PipelineOptions,
) -> Result<GenericDiagram, WiringError> {
    let chart = match opts.chart {
        ChartKind::Paper => paper_chart(),
        ChartKind::Standard => standard_chart(),
        ChartKind::Auto => chart_for_line(a, infinity)?,
    };
    let aff = to_affine(a, infinity, &chart)?;
    let mut last = WiringError::ZeroEpsilon;
    for k in opts.epsilon_start..opts.epsilon_start + 24 {
        let eps = Rational::new((-1).into(), num_bigint::BigInt::from(1u64 << k));
        let generic = match aff.perturb_to_generic(&eps) {
            Ok(g) => g,
            Err(e @ WiringError::EpsilonTooCoarse(_)) => {
                last = e;
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut popts = PathOptions {
            below: opts.detour_below,
            ..PathOptions::default()
        };
        for j in 0..12u32 {
            let q = Rational::new(1.into(), (8 + 3 * i64::from(j)).into());
            let rotated = generic.rotate_fibers(&q);
            let svals = match rotated.singular_values() {
                Ok(s) => s,
                Err(e @ WiringError::EpsilonTooCoarse(_)) => {
                    last = e;
                    break;
                }
                Err(e) => return Err(e),
            };
            let nu = build_path(&svals, rotated.field_order(), &popts);
            match wiring_diagram(&rotated, &nu) {
                Ok(diagram) => {
                    return Ok(GenericDiagram {
                        affine: rotated,
                        epsilon: eps,
                        rotation: q,
                        path: nu,
                        diagram,
                    })
                }
                Err(e @ WiringError::DegeneratePath(_)) => {
                    last = e;
                    let third = Rational::new(1.into(), 3.into());
                    popts.delta *= &third;
                    popts.height *= &third;
                }
                Err(e) => return Err(e),
            }
        }
    }
    Err(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::builtin_arrangement;
    use alloc::collections::BTreeSet;

    fn n_plus_affine() -> AffineArrangement {
        let a = builtin_arrangement("N+").unwrap();
        to_affine(&a, 5, &paper_chart()).unwrap()
    }


    #[test]
    fn paper_chart_verticals() {
        let aff = n_plus_affine();
        assert_eq!(aff.wires.len() + aff.verticals.len(), 10);
        let verts: Vec<usize> = aff.verticals.iter().map(|(l, _)| *l).collect();
        assert_eq!(verts, vec![1, 3, 7]);
        assert_eq!(aff.field_order(), 40);
        assert_eq!(aff.infinity_label, 5);
    }

    #[test]
    fn standard_chart_verticals() {
        let a = builtin_arrangement("N+").unwrap();
        let aff = to_affine(&a, 5, &standard_chart()).unwrap();
        // Same incidences at infinity: L1, L3, L7 pass through the old
        // intersection with L5, which this chart also sends to the vertical
        // direction.
        let verts: Vec<usize> = aff.verticals.iter().map(|(l, _)| *l).collect();
        assert_eq!(verts, vec![1, 3, 7]);
    }

    #[test]
    fn identity_chart_rejected() {
        let a = builtin_arrangement("N+").unwrap();
        let n = 40;
        let id: [[CycNum; 3]; 3] = core::array::from_fn(|i| {
            core::array::from_fn(|j| if i == j { CycNum::one(n) } else { CycNum::zero(n) })
        });
        assert_eq!(
            to_affine(&a, 5, &id).unwrap_err(),
            WiringError::ChartInfinity { label: 5 }
        );
    }

    #[test]
    fn auto_chart_works_for_any_line() {
        let a = builtin_arrangement("N+").unwrap();
        for r in [5usize, 6, 11] {
            let chart = chart_for_line(&a, r).unwrap();
            let aff = to_affine(&a, r, &chart).unwrap();
            assert_eq!(aff.wires.len() + aff.verticals.len(), 10, "line {r}");
        }
    }

    #[test]
    fn zero_epsilon_rejected() {
        let aff = n_plus_affine();
        assert_eq!(
            aff.perturb_to_generic(&Rational::new(0.into(), 1.into())),
            Err(WiringError::ZeroEpsilon)
        );
    }

    #[test]
    fn perturbation_keeps_parallels() {
        let aff = n_plus_affine();
        let eps = Rational::new((-1).into(), 8.into());
        let g = aff.perturb_to_generic(&eps).unwrap();
        assert!(g.is_generic());
        assert_eq!(g.wires.len(), 10);
        // Former verticals 1, 3, 7 share the slope 1/eps.
        let slope_of = |l: usize| &g.wires.iter().find(|w| w.label == l).unwrap().slope;
        assert_eq!(slope_of(1), slope_of(3));
        assert_eq!(slope_of(3), slope_of(7));
        // The parallel families stay parallel.
        assert_eq!(slope_of(2), slope_of(4));
        assert_eq!(slope_of(4), slope_of(10));
        assert_eq!(slope_of(8), slope_of(9));
    }

    #[test]
    fn eighteen_singular_values() {
        let aff = n_plus_affine();
        let eps = Rational::new((-1).into(), 8.into());
        let g = aff.perturb_to_generic(&eps).unwrap();
        let svals = g.singular_values().unwrap();
        assert_eq!(svals.len(), 18);
        // Pair coverage: 45 pairs minus 7 parallel pairs.
        let covered: usize = svals.iter().map(|s| s.wires.len() * (s.wires.len() - 1) / 2).sum();
        assert_eq!(covered, 38);
    }

    fn toy(wires: &[(usize, i64, i64)]) -> AffineArrangement {
        // Integer-slope wires over Q(zeta_40).
        let n = 40;
        AffineArrangement {
            wires: wires
                .iter()
                .map(|&(label, m, c)| Wire {
                    label,
                    slope: CycNum::from_integer(m, n),
                    intercept: CycNum::from_integer(c, n),
                })
                .collect(),
            verticals: vec![],
            embedding: Embedding::new(10, 3).unwrap().lift_to(40).unwrap(),
            infinity_label: 0,
        }
    }

    #[test]
    fn two_real_wires_single_node() {
        let aff = toy(&[(1, 0, 0), (2, 1, 0)]);
        let svals = aff.singular_values().unwrap();
        assert_eq!(svals.len(), 1);
        assert_eq!(svals[0].wires, vec![1, 2]);
        let nu = build_path(&svals, 40, &PathOptions::default());
        let d = wiring_diagram(&aff, &nu).unwrap();
        assert_eq!(d.events, vec![Event::Node { at: 1, wires: vec![1, 2] }]);
        assert_eq!(d.initial_order, vec![1, 2]);
        assert_eq!(d.final_order, vec![2, 1]);
    }

    #[test]
    fn crossing_wires_swap() {
        let aff = toy(&[(1, 1, 0), (2, -1, 0)]);
        let svals = aff.singular_values().unwrap();
        let nu = build_path(&svals, 40, &PathOptions::default());
        let d = wiring_diagram(&aff, &nu).unwrap();
        assert_eq!(d.events.len(), 1);
        assert!(matches!(&d.events[0], Event::Node { wires, .. } if wires == &vec![1, 2]));
    }

    #[test]
    fn parallel_wires_no_singular_values() {
        let aff = toy(&[(1, 0, 0), (2, 0, 1)]);
        assert!(aff.singular_values().unwrap().is_empty());
        let nu = build_path(&[], 40, &PathOptions::default());
        let d = wiring_diagram(&aff, &nu).unwrap();
        assert!(d.events.is_empty());
        assert_eq!(d.initial_order, d.final_order);
    }

    #[test]
    fn three_wires_triple_point() {
        let aff = toy(&[(1, 1, 0), (2, 0, 0), (3, -1, 0)]);
        let svals = aff.singular_values().unwrap();
        assert_eq!(svals.len(), 1);
        assert_eq!(svals[0].wires, vec![1, 2, 3]);
        let nu = build_path(&svals, 40, &PathOptions::default());
        let d = wiring_diagram(&aff, &nu).unwrap();
        assert_eq!(d.events.len(), 1);
        assert_eq!(d.final_order, vec![d.initial_order[2], d.initial_order[1], d.initial_order[0]]);
    }

    #[test]
    fn n_plus_full_diagram() {
        let a = builtin_arrangement("N+").unwrap();
        let g = generic_diagram(&a, 5, &PipelineOptions::default()).unwrap();
        let d = &g.diagram;
        assert_eq!(d.n_strands(), 10);
        // 18 nodes, and every wire pair meets in exactly one node.
        let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut node_count = 0;
        for e in d.nodes() {
            node_count += 1;
            if let Event::Node { wires, .. } = e {
                for x in 0..wires.len() {
                    for y in x + 1..wires.len() {
                        assert!(pairs.insert((wires[x], wires[y])), "pair repeated");
                    }
                }
            }
        }
        assert_eq!(node_count, 18);
        assert_eq!(pairs.len(), 38);
    }

    #[test]
    fn conjugate_diagram_flips_crossings() {
        let a = builtin_arrangement("N+").unwrap();
        let g = generic_diagram(&a, 5, &PipelineOptions::default()).unwrap();
        // The exact mirror image: every field constant replaced by its Galois
        // conjugate, embedded under the conjugate embedding. Im flips, Re
        // stays, so crossings keep over and under but negate their signs.
        let aff = &g.affine;
        let aff_c = AffineArrangement {
            wires: aff
                .wires
                .iter()
                .map(|w| Wire {
                    label: w.label,
                    slope: w.slope.conj(),
                    intercept: w.intercept.conj(),
                })
                .collect(),
            verticals: aff
                .verticals
                .iter()
                .map(|(l, v)| (*l, v.conj()))
                .collect(),
            embedding: aff.embedding().conjugate(),
            infinity_label: aff.infinity_label,
        };
        let path_c = PathNu {
            segments: g
                .path
                .segments
                .iter()
                .map(|s| PathSegment {
                    z0: s.z0.conj(),
                    z1: s.z1.conj(),
                    node: s.node.as_ref().map(|n| SingularValue {
                        x: n.x.conj(),
                        wires: n.wires.clone(),
                    }),
                })
                .collect(),
        };
        let d_c = wiring_diagram(&aff_c, &path_c).unwrap();
        let d = &g.diagram;
        assert_eq!(d.events.len(), d_c.events.len());
        for (e, ec) in d.events.iter().zip(d_c.events.iter()) {
            match (e, ec) {
                (Event::Node { wires: w, .. }, Event::Node { wires: wc, .. }) => {
                    assert_eq!(w, wc)
                }
                (
                    Event::Crossing { sign, over, under, .. },
                    Event::Crossing { sign: sc, over: oc, under: uc, .. },
                ) => {
                    assert_eq!(over, oc);
                    assert_eq!(under, uc);
                    assert_eq!(i32::from(*sign), -i32::from(*sc));
                }
                _ => panic!("event shapes differ"),
            }
        }
    }
}
