//! The symplectic generalized quadrangle W(3,q).
//!
//! Points are the points of PG(3,q); lines are the totally isotropic
//! 2-dimensional subspaces of the symplectic 4-space. Together they satisfy
//! the quadrangle property: for a point off a line there is exactly one line
//! through the point meeting the line.
//!
//! Everything downstream identifies points and lines by their index in the
//! `Quadrangle`'s canonical orderings (points: lexicographic by normalized
//! coordinate codes; lines: lexicographic by flattened reduced-row-echelon
//! basis codes).

use crate::field::{Field, Fq};
use std::collections::HashMap;

/// The alternating form u0*v3 + u1*v2 - u2*v1 - u3*v0.
///
/// With respect to the basis e0..e3 it pairs e_i with e_{3-i}:
/// (e0,e3) = (e1,e2) = 1.
pub fn symplectic_form(field: &Field, u: &[Fq; 4], v: &[Fq; 4]) -> Fq {
    let a = field.mul(u[0], v[3]);
    let b = field.mul(u[1], v[2]);
    let c = field.mul(u[2], v[1]);
    let d = field.mul(u[3], v[0]);
    field.sub(field.sub(field.add(a, b), c), d)
}

/// A point of PG(3,q), normalized so the leftmost nonzero coordinate is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: [Fq; 4],
}

impl ProjPoint {
    /// Normalizes a nonzero coordinate vector. Panics on the zero vector.
    pub fn new(field: &Field, coords: [Fq; 4]) -> ProjPoint {
        let lead = coords
            .iter()
            .position(|x| !x.is_zero())
            .expect("projective point needs a nonzero coordinate");
        let scale = field.inv(coords[lead]);
        let mut c = coords;
        for x in c.iter_mut() {
            *x = field.mul(scale, *x);
        }
        ProjPoint { coords: c }
    }

    pub fn coords(&self) -> &[Fq; 4] {
        &self.coords
    }

    pub fn codes(&self) -> [u32; 4] {
        [
            self.coords[0].code(),
            self.coords[1].code(),
            self.coords[2].code(),
            self.coords[3].code(),
        ]
    }
}

/// A totally isotropic line, canonically represented by the reduced row
/// echelon form of a 2x4 spanning matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoLine {
    basis: [[Fq; 4]; 2],
    points: Vec<usize>,
}

impl IsoLine {
    pub fn basis(&self) -> &[[Fq; 4]; 2] {
        &self.basis
    }

    /// Indices of the q+1 points on the line, ascending.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn contains(&self, point: usize) -> bool {
        self.points.binary_search(&point).is_ok()
    }

    /// The eight basis entry codes, row-major — the line's sort key.
    pub fn flat_codes(&self) -> [u32; 8] {
        let mut key = [0u32; 8];
        for r in 0..2 {
            for c in 0..4 {
                key[4 * r + c] = self.basis[r][c].code();
            }
        }
        key
    }
}

/// Reduced row echelon form of the 2x4 matrix [u; v]; None if u, v are
/// linearly dependent.
fn rref2(field: &Field, u: [Fq; 4], v: [Fq; 4]) -> Option<[[Fq; 4]; 2]> {
    let mut rows = [u, v];
    let mut row = 0;
    for col in 0..4 {
        if row == 2 {
            break;
        }
        let Some(pick) = (row..2).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row, pick);
        let scale = field.inv(rows[row][col]);
        for c in col..4 {
            rows[row][c] = field.mul(scale, rows[row][c]);
        }
        let other = 1 - row;
        if !rows[other][col].is_zero() {
            let factor = rows[other][col];
            for c in 0..4 {
                rows[other][c] = field.sub(rows[other][c], field.mul(factor, rows[row][c]));
            }
        }
        row += 1;
    }
    if row == 2 {
        Some(rows)
    } else {
        None
    }
}

/// The symplectic generalized quadrangle over GF(q): all points of PG(3,q),
/// all totally isotropic lines, the distinguished point p0 = `<e0>` and line
/// l0 = `<e0,e1>`, and the restricted sets P1 (points not collinear with p0)
/// and L1 (lines disjoint from l0).
pub struct Quadrangle {
    field: Field,
    points: Vec<ProjPoint>,
    lines: Vec<IsoLine>,
    point_index: HashMap<[u32; 4], usize>,
    line_index: HashMap<[u32; 8], usize>,
    lines_through: Vec<Vec<usize>>,
    p0: usize,
    l0: usize,
    p1: Vec<usize>,
    l1: Vec<usize>,
}

impl Quadrangle {
    pub fn new(field: &Field) -> Quadrangle {
        let q = field.order() as usize;
        let points = enumerate_points(field);
        let point_index: HashMap<[u32; 4], usize> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.codes(), i))
            .collect();

        // Scan point pairs; every pair on which the form vanishes spans a
        // totally isotropic 2-space (the form is alternating, so vanishing
        // on a spanning pair means vanishing identically).
        let mut seen: HashMap<[u32; 8], IsoLine> = HashMap::new();
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                let u = *points[i].coords();
                let v = *points[j].coords();
                if !symplectic_form(field, &u, &v).is_zero() {
                    continue;
                }
                let basis = rref2(field, u, v).expect("distinct points are independent");
                let mut key = [0u32; 8];
                for r in 0..2 {
                    for c in 0..4 {
                        key[4 * r + c] = basis[r][c].code();
                    }
                }
                seen.entry(key).or_insert_with(|| {
                    let pts = line_points(field, &basis, &point_index);
                    IsoLine { basis, points: pts }
                });
            }
        }
        let mut keyed: Vec<([u32; 8], IsoLine)> = seen.into_iter().collect();
        keyed.sort_by_key(|a| a.0);
        let line_index: HashMap<[u32; 8], usize> = keyed
            .iter()
            .enumerate()
            .map(|(i, (k, _))| (*k, i))
            .collect();
        let lines: Vec<IsoLine> = keyed.into_iter().map(|(_, l)| l).collect();

        let mut lines_through = vec![Vec::new(); points.len()];
        for (li, line) in lines.iter().enumerate() {
            debug_assert_eq!(line.points().len(), q + 1);
            for &pi in line.points() {
                lines_through[pi].push(li);
            }
        }

        let e0 = [field.one(), field.zero(), field.zero(), field.zero()];
        let e1 = [field.zero(), field.one(), field.zero(), field.zero()];
        let p0 = point_index[&ProjPoint::new(field, e0).codes()];
        let l0_basis = rref2(field, e0, e1).expect("e0, e1 independent");
        let mut l0_key = [0u32; 8];
        for r in 0..2 {
            for c in 0..4 {
                l0_key[4 * r + c] = l0_basis[r][c].code();
            }
        }
        let l0 = line_index[&l0_key];

        let p0_coords = *points[p0].coords();
        let p1: Vec<usize> = (0..points.len())
            .filter(|&i| !symplectic_form(field, &p0_coords, points[i].coords()).is_zero())
            .collect();
        let l0_points = lines[l0].points().to_vec();
        let l1: Vec<usize> = (0..lines.len())
            .filter(|&i| lines[i].points().iter().all(|p| !l0_points.contains(p)))
            .collect();

        Quadrangle {
            field: field.clone(),
            points,
            lines,
            point_index,
            line_index,
            lines_through,
            p0,
            l0,
            p1,
            l1,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn lines(&self) -> &[IsoLine] {
        &self.lines
    }

    /// Index of the point with the given (not necessarily normalized)
    /// coordinates.
    pub fn find_point(&self, coords: [Fq; 4]) -> Option<usize> {
        self.point_index
            .get(&ProjPoint::new(&self.field, coords).codes())
            .copied()
    }

    /// Index of the line spanned by the two (independent) vectors, if it is
    /// totally isotropic.
    pub fn find_line(&self, u: [Fq; 4], v: [Fq; 4]) -> Option<usize> {
        let basis = rref2(&self.field, u, v)?;
        let mut key = [0u32; 8];
        for r in 0..2 {
            for c in 0..4 {
                key[4 * r + c] = basis[r][c].code();
            }
        }
        self.line_index.get(&key).copied()
    }

    pub fn p0(&self) -> usize {
        self.p0
    }

    pub fn l0(&self) -> usize {
        self.l0
    }

    /// Points not collinear with p0, ascending. |P1| = q^3.
    pub fn p1(&self) -> &[usize] {
        &self.p1
    }

    /// Lines disjoint from l0, ascending. |L1| = q^3.
    pub fn l1(&self) -> &[usize] {
        &self.l1
    }

    /// Lines through the given point, ascending; always q+1 of them.
    pub fn lines_through(&self, point: usize) -> &[usize] {
        &self.lines_through[point]
    }

    /// All points collinear with `point` (including itself): the perp of the
    /// point under the symplectic form. Size q^2 + q + 1.
    pub fn perp(&self, point: usize) -> Vec<usize> {
        let u = *self.points[point].coords();
        (0..self.points.len())
            .filter(|&i| symplectic_form(&self.field, &u, self.points[i].coords()).is_zero())
            .collect()
    }

    /// The unique line through `point` that meets `line`, for a point not on
    /// the line (the quadrangle property). Panics if the point is on the line.
    pub fn trace(&self, point: usize, line: usize) -> usize {
        assert!(
            !self.lines[line].contains(point),
            "trace requires a point off the line"
        );
        let u = *self.points[point].coords();
        let mut found = None;
        for &r in self.lines[line].points() {
            if symplectic_form(&self.field, &u, self.points[r].coords()).is_zero() {
                assert!(found.is_none(), "quadrangle property violated: two traces");
                found = Some(r);
            }
        }
        let r = found.expect("quadrangle property violated: no trace");
        let mut hit = None;
        for &li in &self.lines_through[point] {
            if self.lines[li].contains(r) {
                assert!(hit.is_none(), "two lines through the same two points");
                hit = Some(li);
            }
        }
        hit.expect("collinear points must share a line")
    }
}

/// All points of PG(3,q) in ascending lexicographic order of their
/// normalized coordinate codes.
fn enumerate_points(field: &Field) -> Vec<ProjPoint> {
    let mut points = Vec::new();
    // A normalized vector is zero before its leading 1; ascending leading
    // position 3, 2, 1, 0 with the free tail in odometer order is exactly
    // ascending lexicographic order of the full coordinate tuple.
    for lead in (0..4).rev() {
        let free = 3 - lead;
        let mut tail = vec![0u32; free];
        loop {
            let mut coords = [field.zero(); 4];
            coords[lead] = field.one();
            for (k, &code) in tail.iter().enumerate() {
                coords[lead + 1 + k] = field.element(code);
            }
            points.push(ProjPoint { coords });
            // odometer increment, most significant digit first
            let mut k = free;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                tail[k] += 1;
                if tail[k] < field.order() {
                    break;
                }
                tail[k] = 0;
            }
            if tail.iter().all(|&d| d == 0) {
                break;
            }
        }
    }
    points
}

/// The q+1 point indices on the line with the given RREF basis, ascending.
fn line_points(
    field: &Field,
    basis: &[[Fq; 4]; 2],
    point_index: &HashMap<[u32; 4], usize>,
) -> Vec<usize> {
    let mut pts = Vec::with_capacity(field.order() as usize + 1);
    // u + t*v for all t, plus v itself: u's pivot precedes v's, so every
    // such vector is already normalized.
    for t in field.elements() {
        let mut coords = [field.zero(); 4];
        for c in 0..4 {
            coords[c] = field.add(basis[0][c], field.mul(t, basis[1][c]));
        }
        let key = [
            coords[0].code(),
            coords[1].code(),
            coords[2].code(),
            coords[3].code(),
        ];
        pts.push(point_index[&key]);
    }
    let v = basis[1];
    let key = [v[0].code(), v[1].code(), v[2].code(), v[3].code()];
    pts.push(point_index[&key]);
    pts.sort_unstable();
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadrangle(q: u32) -> Quadrangle {
        Quadrangle::new(&Field::new(q).unwrap())
    }

    #[test]
    fn form_pairs_basis_vectors() {
        let field = Field::new(3).unwrap();
        let z = field.zero();
        let o = field.one();
        let e = |i: usize| {
            let mut v = [z; 4];
            v[i] = o;
            v
        };
        assert_eq!(symplectic_form(&field, &e(0), &e(3)), o);
        assert_eq!(symplectic_form(&field, &e(1), &e(2)), o);
        assert_eq!(symplectic_form(&field, &e(0), &e(1)), z);
        assert_eq!(symplectic_form(&field, &e(3), &e(0)), field.neg(o));
    }

    #[test]
    fn form_is_alternating_and_bilinear() {
        let field = Field::new(3).unwrap();
        let g = quadrangle(3);
        for p in g.points() {
            assert!(symplectic_form(&field, p.coords(), p.coords()).is_zero());
        }
        // antisymmetry on a sample of pairs
        for i in (0..40).step_by(7) {
            for j in (0..40).step_by(5) {
                let u = g.points()[i].coords();
                let v = g.points()[j].coords();
                let uv = symplectic_form(&field, u, v);
                let vu = symplectic_form(&field, v, u);
                assert_eq!(uv, field.neg(vu));
            }
        }
    }

    #[test]
    fn counts_q2_and_q3() {
        for (q, n) in [(2u32, 15usize), (3, 40)] {
            let g = quadrangle(q);
            assert_eq!(g.points().len(), n);
            assert_eq!(g.lines().len(), n);
            assert_eq!(g.p1().len(), (q * q * q) as usize);
            assert_eq!(g.l1().len(), (q * q * q) as usize);
        }
    }

    #[test]
    fn point_enumeration_is_lexicographic_and_complete() {
        let g = quadrangle(3);
        let codes: Vec<[u32; 4]> = g.points().iter().map(|p| p.codes()).collect();
        for w in codes.windows(2) {
            assert!(w[0] < w[1], "points out of order: {:?} !< {:?}", w[0], w[1]);
        }
        assert_eq!(codes[0], [0, 0, 0, 1]);
        assert_eq!(codes.last().unwrap()[0], 1);
    }

    #[test]
    fn lines_are_sorted_and_totally_isotropic() {
        for q in [2u32, 3, 4, 5] {
            let field = Field::new(q).unwrap();
            let g = Quadrangle::new(&field);
            let mut prev: Option<[u32; 8]> = None;
            for line in g.lines() {
                let key = line.flat_codes();
                if let Some(p) = prev {
                    assert!(p < key, "lines out of order");
                }
                prev = Some(key);
                assert_eq!(line.points().len(), q as usize + 1);
                for &i in line.points() {
                    for &j in line.points() {
                        let u = g.points()[i].coords();
                        let v = g.points()[j].coords();
                        assert!(symplectic_form(&field, u, v).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn partial_linear_space() {
        // two distinct lines share at most one point
        for q in [2u32, 3, 4, 5] {
            let g = quadrangle(q);
            for i in 0..g.lines().len() {
                for j in i + 1..g.lines().len() {
                    let a = g.lines()[i].points();
                    let common = a.iter().filter(|p| g.lines()[j].contains(**p)).count();
                    assert!(common <= 1, "lines {i} and {j} share {common} points");
                }
            }
        }
    }

    #[test]
    fn point_line_regularity() {
        for q in [2u32, 3, 5] {
            let g = quadrangle(q);
            for p in 0..g.points().len() {
                assert_eq!(g.lines_through(p).len(), q as usize + 1);
            }
        }
    }

    #[test]
    fn distinguished_objects() {
        let field = Field::new(3).unwrap();
        let g = Quadrangle::new(&field);
        assert_eq!(g.points()[g.p0()].codes(), [1, 0, 0, 0]);
        let l0 = &g.lines()[g.l0()];
        assert!(l0.contains(g.p0()));
        // l0 = <e0,e1>: all its points have x2 = x3 = 0
        for &p in l0.points() {
            let c = g.points()[p].codes();
            assert_eq!((c[2], c[3]), (0, 0));
        }
        // q+1 lines through p0, with every point collinear with p0
        let through = g.lines_through(g.p0());
        assert_eq!(through.len(), 4);
        let perp = g.perp(g.p0());
        for &li in through {
            for &p in g.lines()[li].points() {
                assert!(perp.binary_search(&p).is_ok());
            }
        }
    }

    #[test]
    fn perp_sizes_and_membership() {
        for q in [2u32, 3] {
            let g = quadrangle(q);
            let expect = (q * q + q + 1) as usize;
            for p in 0..g.points().len() {
                let perp = g.perp(p);
                assert_eq!(perp.len(), expect);
                assert!(perp.binary_search(&p).is_ok());
            }
        }
    }

    #[test]
    fn p1_is_complement_of_p0_perp() {
        for q in [2u32, 3] {
            let g = quadrangle(q);
            let perp = g.perp(g.p0());
            let complement: Vec<usize> = (0..g.points().len())
                .filter(|p| perp.binary_search(p).is_err())
                .collect();
            assert_eq!(g.p1(), complement.as_slice());
            // P1 is exactly the locus x3 != 0
            for &p in g.p1() {
                assert_ne!(g.points()[p].codes()[3], 0);
            }
        }
    }

    #[test]
    fn l1_misses_l0() {
        for q in [2u32, 3, 4] {
            let g = quadrangle(q);
            let l0_points = g.lines()[g.l0()].points();
            for &li in g.l1() {
                for &p in g.lines()[li].points() {
                    assert!(l0_points.binary_search(&p).is_err());
                }
            }
            assert_eq!(g.l1().len(), (q * q * q) as usize);
        }
    }

    #[test]
    fn trace_exhaustive_q2() {
        let g = quadrangle(2);
        for p in 0..g.points().len() {
            for l in 0..g.lines().len() {
                if g.lines()[l].contains(p) {
                    continue;
                }
                let t = g.trace(p, l);
                assert!(g.lines()[t].contains(p));
                let met = g.lines()[t]
                    .points()
                    .iter()
                    .filter(|x| g.lines()[l].contains(**x))
                    .count();
                assert_eq!(met, 1);
                // uniqueness: no other line through p meets l
                for &other in g.lines_through(p) {
                    if other == t {
                        continue;
                    }
                    assert!(g.lines()[other]
                        .points()
                        .iter()
                        .all(|x| !g.lines()[l].contains(*x)));
                }
            }
        }
    }

    #[test]
    fn trace_from_p0_to_l1_lines() {
        let g = quadrangle(3);
        for &l in g.l1() {
            let t = g.trace(g.p0(), l);
            assert!(g.lines()[t].contains(g.p0()));
            let met = g.lines()[t]
                .points()
                .iter()
                .filter(|x| g.lines()[l].contains(**x))
                .count();
            assert_eq!(met, 1);
        }
    }

    #[test]
    #[should_panic(expected = "point off the line")]
    fn trace_rejects_incident_pair() {
        let g = quadrangle(2);
        let _ = g.trace(g.p0(), g.l0());
    }

    #[test]
    fn find_line_round_trip() {
        let g = quadrangle(3);
        for (i, line) in g.lines().iter().enumerate() {
            let [u, v] = *line.basis();
            assert_eq!(g.find_line(u, v), Some(i));
            // re-spanned by different points
            let a = *g.points()[line.points()[0]].coords();
            let b = *g.points()[line.points()[2]].coords();
            assert_eq!(g.find_line(a, b), Some(i));
        }
    }
}
