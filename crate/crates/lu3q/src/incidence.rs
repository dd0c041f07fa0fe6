//! Incidence matrices: the four geometric systems (P,L), (P1,L1), (P,L1),
//! (P1,L) of the quadrangle, and the affine system H(3,q).
//!
//! Geometric matrices follow the convention rows = points, columns = lines.
//! H(3,q) has rows indexed by the line set L* and columns by the point set
//! P*, both copies of F_q^3 in lexicographic code order; a point (a,b,c) is
//! incident with a line `[x,y,z]` when y = ax + b and z = ay + c.

use crate::field::{Field, Fq};
use crate::geometry::Quadrangle;
use crate::gf2::BitMatrix;

/// An element of F_q^3, used both as a P* point (a,b,c) and an L* line
/// `[x,y,z]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineTriple {
    coords: [Fq; 3],
}

impl AffineTriple {
    pub fn new(a: Fq, b: Fq, c: Fq) -> AffineTriple {
        assert!(
            a.order() == b.order() && b.order() == c.order(),
            "triple components from different fields"
        );
        AffineTriple { coords: [a, b, c] }
    }

    pub fn coords(&self) -> [Fq; 3] {
        self.coords
    }

    /// Position of the triple in lexicographic code order.
    pub fn lex_index(&self) -> usize {
        let q = self.coords[0].order() as usize;
        (self.coords[0].code() as usize * q + self.coords[1].code() as usize) * q
            + self.coords[2].code() as usize
    }

    /// Inverse of `lex_index`.
    pub fn from_lex_index(field: &Field, index: usize) -> AffineTriple {
        let q = field.order() as usize;
        assert!(index < q * q * q, "triple index {index} out of range");
        AffineTriple {
            coords: [
                field.element((index / (q * q)) as u32),
                field.element((index / q % q) as u32),
                field.element((index % q) as u32),
            ],
        }
    }
}

/// All q^3 triples in lexicographic code order.
pub fn all_triples(field: &Field) -> Vec<AffineTriple> {
    let q = field.order() as usize;
    (0..q * q * q)
        .map(|i| AffineTriple::from_lex_index(field, i))
        .collect()
}

/// The defining relation of H(3,q): point (a,b,c) lies on line `[x,y,z]` when
/// y = ax + b and z = ay + c.
pub fn h3q_incident(field: &Field, point: &AffineTriple, line: &AffineTriple) -> bool {
    let [a, b, c] = point.coords();
    let [x, y, z] = line.coords();
    y == field.add(field.mul(a, x), b) && z == field.add(field.mul(a, y), c)
}

/// Which point set indexes the rows of a geometric incidence matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Points {
    /// All points of the quadrangle.
    P,
    /// Points not collinear with p0.
    P1,
}

/// Which line set indexes the columns of a geometric incidence matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lines {
    /// All totally isotropic lines.
    L,
    /// Lines disjoint from l0.
    L1,
}

/// An ordered binary incidence structure: `matrix[(i, j)] = 1` iff the row
/// object labeled `row_labels[i]` is incident with the column object labeled
/// `col_labels[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceSystem<L> {
    pub row_labels: Vec<L>,
    pub col_labels: Vec<L>,
    pub matrix: BitMatrix,
}

impl<L> IncidenceSystem<L> {
    /// Per-row and per-column population counts.
    pub fn weights(&self) -> (Vec<usize>, Vec<usize>) {
        let rows = (0..self.matrix.rows())
            .map(|r| self.matrix.row_weight(r))
            .collect();
        let cols = (0..self.matrix.cols())
            .map(|c| self.matrix.col_weight(c))
            .collect();
        (rows, cols)
    }
}

/// Builds one of M(P,L), M(P1,L1), M(P,L1), M(P1,L): rows are points,
/// columns are lines, orders inherited from the quadrangle.
pub fn geometric(g: &Quadrangle, rows: Points, cols: Lines) -> IncidenceSystem<usize> {
    let row_labels: Vec<usize> = match rows {
        Points::P => (0..g.points().len()).collect(),
        Points::P1 => g.p1().to_vec(),
    };
    let col_labels: Vec<usize> = match cols {
        Lines::L => (0..g.lines().len()).collect(),
        Lines::L1 => g.l1().to_vec(),
    };
    let mut row_of: Vec<Option<usize>> = vec![None; g.points().len()];
    for (i, &p) in row_labels.iter().enumerate() {
        row_of[p] = Some(i);
    }
    let mut matrix = BitMatrix::zeros(row_labels.len(), col_labels.len());
    for (j, &line) in col_labels.iter().enumerate() {
        for &p in g.lines()[line].points() {
            if let Some(i) = row_of[p] {
                matrix.set(i, j, true);
            }
        }
    }
    IncidenceSystem {
        row_labels,
        col_labels,
        matrix,
    }
}

/// Builds H(3,q): rows = L* lines `[x,y,z]`, columns = P* points (a,b,c),
/// both in lexicographic code order.
pub fn h3q(field: &Field) -> IncidenceSystem<AffineTriple> {
    let triples = all_triples(field);
    let q = field.order() as usize;
    let n = q * q * q;
    let mut matrix = BitMatrix::zeros(n, n);
    // For a fixed point (a,b,c), the incident lines are parametrized by
    // free x with y = ax + b and z = ay + c forced.
    for (j, point) in triples.iter().enumerate() {
        let [a, b, c] = point.coords();
        for x in field.elements() {
            let y = field.add(field.mul(a, x), b);
            let z = field.add(field.mul(a, y), c);
            let row = AffineTriple::new(x, y, z).lex_index();
            matrix.set(row, j, true);
        }
    }
    IncidenceSystem {
        row_labels: triples.clone(),
        col_labels: triples,
        matrix,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadrangle(q: u32) -> Quadrangle {
        Quadrangle::new(&Field::new(q).unwrap())
    }

    #[test]
    fn triple_indexing_round_trips() {
        let field = Field::new(4).unwrap();
        for i in 0..64 {
            let t = AffineTriple::from_lex_index(&field, i);
            assert_eq!(t.lex_index(), i);
        }
        let t = AffineTriple::new(field.element(2), field.element(0), field.element(3));
        assert_eq!(t.lex_index(), 2 * 16 + 3);
    }

    #[test]
    fn full_system_weights_q2() {
        let g = quadrangle(2);
        let s = geometric(&g, Points::P, Lines::L);
        assert_eq!(s.matrix.rows(), 15);
        assert_eq!(s.matrix.cols(), 15);
        let (rw, cw) = s.weights();
        assert!(rw.iter().all(|&w| w == 3));
        assert!(cw.iter().all(|&w| w == 3));
    }

    #[test]
    fn restricted_system_weights_q3() {
        let g = quadrangle(3);
        let s = geometric(&g, Points::P1, Lines::L1);
        assert_eq!(s.matrix.rows(), 27);
        assert_eq!(s.matrix.cols(), 27);
        let (rw, cw) = s.weights();
        assert!(rw.iter().all(|&w| w == 3));
        assert!(cw.iter().all(|&w| w == 3));
    }

    #[test]
    fn restricted_matrix_is_submatrix_of_full() {
        let g = quadrangle(3);
        let full = geometric(&g, Points::P, Lines::L);
        let restricted = geometric(&g, Points::P1, Lines::L1);
        for (i, &p) in restricted.row_labels.iter().enumerate() {
            for (j, &l) in restricted.col_labels.iter().enumerate() {
                let pi = full.row_labels.iter().position(|&x| x == p).unwrap();
                let lj = full.col_labels.iter().position(|&x| x == l).unwrap();
                assert_eq!(restricted.matrix.get(i, j), full.matrix.get(pi, lj));
            }
        }
    }

    #[test]
    fn rank_of_restricted_system_q2() {
        let g = quadrangle(2);
        let s = geometric(&g, Points::P1, Lines::L1);
        assert_eq!(s.matrix.rows(), 8);
        assert_eq!(s.matrix.rank(), 6);
    }

    #[test]
    fn mixed_system_column_weights() {
        // Every line of L1 carries q+1 points, exactly one of which is
        // collinear with p0; so M(P,L1) has column weight q+1 and its
        // restriction to P1 rows has column weight q.
        let g = quadrangle(3);
        let full_rows = geometric(&g, Points::P, Lines::L1);
        let (_, cw) = full_rows.weights();
        assert!(cw.iter().all(|&w| w == 4));
        let restricted = geometric(&g, Points::P1, Lines::L1);
        let (_, cw1) = restricted.weights();
        assert!(cw1.iter().all(|&w| w == 3));
    }

    #[test]
    fn h3q_q2_matches_hand_computed_matrix() {
        let field = Field::new(2).unwrap();
        let s = h3q(&field);
        let expected = [
            "10001000", "01000100", "00100001", "00010010", "10000010", "01000001", "00100100",
            "00011000",
        ];
        for (r, row) in expected.iter().enumerate() {
            for (c, ch) in row.chars().enumerate() {
                assert_eq!(s.matrix.get(r, c), ch == '1', "mismatch at ({r},{c})");
            }
        }
        assert_eq!(s.matrix.rank(), 6);
    }

    #[test]
    fn h3q_weights_and_rank_q3() {
        let field = Field::new(3).unwrap();
        let s = h3q(&field);
        assert_eq!(s.matrix.rows(), 27);
        let (rw, cw) = s.weights();
        assert!(rw.iter().all(|&w| w == 3));
        assert!(cw.iter().all(|&w| w == 3));
        assert_eq!(s.matrix.rank(), 19);
    }

    #[test]
    fn h3q_zero_point_column() {
        // (a,b,c) = (0,0,0) is incident with [x,y,z] exactly when y = z = 0.
        let field = Field::new(3).unwrap();
        let s = h3q(&field);
        for (r, line) in s.row_labels.iter().enumerate() {
            let [_, y, z] = line.coords();
            assert_eq!(s.matrix.get(r, 0), y.is_zero() && z.is_zero());
        }
    }

    #[test]
    fn h3q_incident_agrees_with_matrix() {
        let field = Field::new(4).unwrap();
        let s = h3q(&field);
        for (r, line) in s.row_labels.iter().enumerate() {
            for (c, point) in s.col_labels.iter().enumerate() {
                assert_eq!(s.matrix.get(r, c), h3q_incident(&field, point, line));
            }
        }
    }

    #[test]
    fn h3q_is_deterministic() {
        let field = Field::new(3).unwrap();
        assert_eq!(h3q(&field), h3q(&field));
    }
}
