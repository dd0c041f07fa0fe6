//! The Klein correspondence between the restricted quadrangle system
//! (P1, L1) and the affine system (P*, L*) of H(3,q).
//!
//! Lines of projective 3-space embed into projective 5-space via their
//! Pluecker coordinates, landing on the quadric
//! p01*p23 - p02*p13 + p03*p12 = 0; totally isotropic lines additionally
//! satisfy p03 = -p12. A point of P1 is written (a:b:c:1) and identified
//! with the triple (a,b,c); a line of L1 has Pluecker coordinates
//! (z^2+xy : x : z : -z : y : 1) and is identified with (x,y,z). In these
//! coordinates incidence becomes z = -cy + b and x = cz - a, and a signed
//! permutation of the triples turns that relation into the defining
//! equations of H(3,q), giving an explicit equivalence of the two systems.

use crate::field::{Field, FieldError, Fq};
use crate::geometry::{IsoLine, ProjPoint, Quadrangle};
use crate::incidence::{self, AffineTriple, Lines, Points};
use serde::Serialize;

/// Pluecker coordinates (p01, p02, p03, p12, p13, p23) of a 2-subspace,
/// scaled so the first nonzero coordinate is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PlueckerCoords {
    coords: [Fq; 6],
}

impl PlueckerCoords {
    /// The six 2x2 minors p_ij = u_i v_j - u_j v_i of the spanning pair,
    /// canonicalized; None if u and v are linearly dependent.
    pub fn from_span(field: &Field, u: &[Fq; 4], v: &[Fq; 4]) -> Option<PlueckerCoords> {
        let minor = |i: usize, j: usize| field.sub(field.mul(u[i], v[j]), field.mul(u[j], v[i]));
        let raw = [
            minor(0, 1),
            minor(0, 2),
            minor(0, 3),
            minor(1, 2),
            minor(1, 3),
            minor(2, 3),
        ];
        let lead = raw.iter().position(|x| !x.is_zero())?;
        let scale = field.inv(raw[lead]);
        let mut coords = raw;
        for x in coords.iter_mut() {
            *x = field.mul(scale, *x);
        }
        Some(PlueckerCoords { coords })
    }

    /// Coordinates of a canonical line of the quadrangle.
    pub fn of_line(field: &Field, line: &IsoLine) -> PlueckerCoords {
        let [u, v] = line.basis();
        PlueckerCoords::from_span(field, u, v).expect("line basis rows are independent")
    }

    /// In the order (p01, p02, p03, p12, p13, p23).
    pub fn coords(&self) -> [Fq; 6] {
        self.coords
    }

    pub fn p01(&self) -> Fq {
        self.coords[0]
    }
    pub fn p02(&self) -> Fq {
        self.coords[1]
    }
    pub fn p03(&self) -> Fq {
        self.coords[2]
    }
    pub fn p12(&self) -> Fq {
        self.coords[3]
    }
    pub fn p13(&self) -> Fq {
        self.coords[4]
    }
    pub fn p23(&self) -> Fq {
        self.coords[5]
    }

    /// Membership in the Klein quadric: p01*p23 - p02*p13 + p03*p12 = 0.
    pub fn satisfies_quadric(&self, field: &Field) -> bool {
        let a = field.mul(self.p01(), self.p23());
        let b = field.mul(self.p02(), self.p13());
        let c = field.mul(self.p03(), self.p12());
        field.add(field.sub(a, b), c).is_zero()
    }

    /// The linear condition p03 = -p12 cutting out the totally isotropic
    /// lines.
    pub fn on_isotropic_locus(&self, field: &Field) -> bool {
        self.p03() == field.neg(self.p12())
    }
}

/// Identifies a point of P1, written (a:b:c:1), with the triple (a,b,c).
/// None when the last coordinate is zero (the point is collinear with p0).
pub fn point_to_affine(field: &Field, point: &ProjPoint) -> Option<AffineTriple> {
    let c = point.coords();
    if c[3].is_zero() {
        return None;
    }
    let scale = field.inv(c[3]);
    Some(AffineTriple::new(
        field.mul(scale, c[0]),
        field.mul(scale, c[1]),
        field.mul(scale, c[2]),
    ))
}

/// Identifies a line of L1, with Pluecker coordinates scaled to
/// (z^2+xy : x : z : -z : y : 1), with the triple (x,y,z). None when
/// p23 = 0 (the line meets l0). Panics if the scaled coordinates fail the
/// parametrization identity p01 = z^2 + xy, which holds for every totally
/// isotropic line with p23 != 0.
pub fn line_to_affine(field: &Field, line: &IsoLine) -> Option<AffineTriple> {
    let pc = PlueckerCoords::of_line(field, line);
    if pc.p23().is_zero() {
        return None;
    }
    let scale = field.inv(pc.p23());
    let at = |v: Fq| field.mul(scale, v);
    let x = at(pc.p02());
    let z = at(pc.p03());
    let y = at(pc.p13());
    let expected = field.add(field.mul(z, z), field.mul(x, y));
    assert_eq!(
        at(pc.p01()),
        expected,
        "isotropic line violates the Pluecker parametrization"
    );
    Some(AffineTriple::new(x, y, z))
}

/// Incidence of a P1 point (a,b,c) with an L1 line (x,y,z) in affine
/// coordinates: z = -cy + b and x = cz - a.
pub fn incident_affine(field: &Field, point: &AffineTriple, line: &AffineTriple) -> bool {
    let [a, b, c] = point.coords();
    let [x, y, z] = line.coords();
    z == field.sub(b, field.mul(c, y)) && x == field.sub(field.mul(c, z), a)
}

/// The change of coordinates on point triples, (a,b,c) -> (-c, b, a).
pub fn map_point(field: &Field, point: &AffineTriple) -> AffineTriple {
    let [a, b, c] = point.coords();
    AffineTriple::new(field.neg(c), b, a)
}

/// The change of coordinates on line triples, (x,y,z) -> (y, z, -x).
pub fn map_line(field: &Field, line: &AffineTriple) -> AffineTriple {
    let [x, y, z] = line.coords();
    AffineTriple::new(y, z, field.neg(x))
}

/// Applies both triple maps; the pair is incident under the affine relation
/// above exactly when the images are incident in H(3,q).
pub fn change_of_coords(
    field: &Field,
    point: &AffineTriple,
    line: &AffineTriple,
) -> (AffineTriple, AffineTriple) {
    (map_point(field, point), map_line(field, line))
}

/// Outcome of the entry-for-entry comparison of M(P1,L1) with the permuted
/// transpose of H(3,q).
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub q: u32,
    pub pass: bool,
    /// Position i of P1 maps to the P* triple with this lexicographic index.
    pub point_perm: Vec<usize>,
    /// Position j of L1 maps to the L* triple with this lexicographic index.
    pub line_perm: Vec<usize>,
    pub first_mismatch: Option<(usize, usize)>,
}

/// Builds the composite bijections P1 -> P* and L1 -> L* and verifies that
/// `M(P1,L1)[i][j] = H(3,q)[line_perm(j)][point_perm(i)]` for every entry.
pub fn equivalence_check(q: u32) -> Result<EquivalenceReport, FieldError> {
    let field = Field::new(q)?;
    let g = Quadrangle::new(&field);
    let m = incidence::geometric(&g, Points::P1, Lines::L1);
    let h = incidence::h3q(&field);

    let point_perm: Vec<usize> = m
        .row_labels
        .iter()
        .map(|&p| {
            let t = point_to_affine(&field, &g.points()[p])
                .expect("P1 points have nonzero last coordinate");
            map_point(&field, &t).lex_index()
        })
        .collect();
    let line_perm: Vec<usize> = m
        .col_labels
        .iter()
        .map(|&l| {
            let t = line_to_affine(&field, &g.lines()[l]).expect("L1 lines have nonzero p23");
            map_line(&field, &t).lex_index()
        })
        .collect();
    for perm in [&point_perm, &line_perm] {
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        assert!(
            sorted.iter().enumerate().all(|(i, &v)| i == v),
            "triple map failed to be a bijection"
        );
    }

    let mut first_mismatch = None;
    'scan: for i in 0..m.matrix.rows() {
        for j in 0..m.matrix.cols() {
            if m.matrix.get(i, j) != h.matrix.get(line_perm[j], point_perm[i]) {
                first_mismatch = Some((i, j));
                break 'scan;
            }
        }
    }
    Ok(EquivalenceReport {
        q,
        pass: first_mismatch.is_none(),
        point_perm,
        line_perm,
        first_mismatch,
    })
}
