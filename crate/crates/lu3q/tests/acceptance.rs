//! Acceptance suite: one test per criterion, each printing a single
//! "acceptance N: PASS|FAIL" line (visible with `--nocapture`).
//!
//! Run with:
//!   cargo test --test acceptance -- --nocapture

use lu3q::field::Field;
use lu3q::geometry::Quadrangle;
use lu3q::gf2::{BitMatrix, BitVec};
use lu3q::incidence::{self, Lines, Points};
use lu3q::klein::{self, PlueckerCoords};
use lu3q::ldpc::{self, Channel};
use lu3q::verify::{self, Verifier};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Cursor;
use std::time::Instant;

fn report(criterion: usize, name: &str, pass: bool) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("acceptance {criterion}: {verdict} — {name}");
    assert!(pass, "acceptance criterion {criterion} failed: {name}");
}

#[test]
fn criterion_1_restricted_rank_formula() {
    let start = Instant::now();
    let mut pass = true;
    for (q, expected) in [(3u32, 19usize), (5, 81), (7, 211), (9, 433)] {
        let field = Field::new(q).unwrap();
        let g = Quadrangle::new(&field);
        let rank = incidence::geometric(&g, Points::P1, Lines::L1)
            .matrix
            .rank();
        pass &= rank == expected;
        pass &= verify::expected_rank_p1l1(q).unwrap() == expected;
    }
    pass &= start.elapsed().as_secs() < 60;
    report(
        1,
        "rank M(P1,L1) = (q^3+2q^2-3q+2)/2 for q in {3,5,7,9}",
        pass,
    );
}

#[test]
fn criterion_2_code_dimension() {
    let mut pass = true;
    for (q, expected) in [(3u32, 8usize), (5, 44), (7, 132), (9, 296)] {
        let field = Field::new(q).unwrap();
        let g = Quadrangle::new(&field);
        let m = incidence::geometric(&g, Points::P1, Lines::L1).matrix;
        let dim = m.cols() - m.rank();
        pass &= dim == expected;
        pass &= verify::expected_dim_lu3(q).unwrap() == expected;
    }
    report(
        2,
        "dim LU(3,q) = (q^3-2q^2+3q-2)/2 for q in {3,5,7,9}",
        pass,
    );
}

#[test]
fn criterion_3_full_rank_formula() {
    let mut pass = true;
    for (q, expected) in [(3u32, 25usize), (5, 91), (7, 225), (9, 451)] {
        let field = Field::new(q).unwrap();
        let g = Quadrangle::new(&field);
        let rank = incidence::geometric(&g, Points::P, Lines::L).matrix.rank();
        pass &= rank == expected;
        pass &= verify::expected_rank_pl(q).unwrap() == expected;
    }
    report(3, "rank M(P,L) = (q^3+2q^2+q+2)/2 for q in {3,5,7,9}", pass);
}

#[test]
fn criterion_4_even_q_recurrence_and_bound() {
    let start = Instant::now();
    let mut pass = true;
    for (q, expected_rank, expected_dim) in [
        (2u32, 10usize, 2usize),
        (4, 50, 22),
        (8, 298, 230),
        (16, 1890, 2238),
    ] {
        let v = Verifier::new(q).unwrap();
        let r = v.rank_report();
        pass &= r.computed_rank_pl == expected_rank && r.expected_rank_pl == expected_rank;
        pass &= r.lower_bound_lu == expected_dim;
        pass &= r.computed_dim_lu == expected_dim && r.bound_attained;
        pass &= r.all_pass();
    }
    pass &= start.elapsed().as_secs() < 900;
    report(
        4,
        "even q: rank M(P,L) = 1 + s_2t and dim attains the bound, q in {2,4,8,16}",
        pass,
    );
}

#[test]
fn criterion_5_equivalence_of_constructions() {
    let mut pass = true;
    for q in [2u32, 3, 4, 5, 7] {
        let r = klein::equivalence_check(q).unwrap();
        pass &= r.pass && r.first_mismatch.is_none();
    }
    report(
        5,
        "M(P1,L1) is a permuted transpose of H(3,q) for q in {2,3,4,5,7}",
        pass,
    );
}

#[test]
fn criterion_6_lemma_suite() {
    let v3 = Verifier::new(3).unwrap();
    let exhaustive = v3.quadrangle().lines().len();
    let r3 = v3.lemma_report(exhaustive);
    let mut pass = r3.pass && r3.sampled_lines == exhaustive;
    pass &= (r3.kernel_dim_pl, r3.kernel_dim_pl1) == (4, 2);

    let v5 = Verifier::new(5).unwrap();
    let r5 = v5.lemma_report(50);
    pass &= r5.pass && r5.sampled_lines >= 50;
    pass &= (r5.kernel_dim_pl, r5.kernel_dim_pl1) == (6, 4);
    report(
        6,
        "neighborhood, Phi, kernel and basis lemmas at q = 3 (exhaustive) and q = 5",
        pass,
    );
}

#[test]
fn criterion_7_row_and_column_weights() {
    let mut pass = true;
    for q in [2u32, 3, 4, 5, 7, 8, 9] {
        let field = Field::new(q).unwrap();
        let g = Quadrangle::new(&field);
        let (rows, cols) = incidence::geometric(&g, Points::P, Lines::L).weights();
        pass &= rows.iter().chain(&cols).all(|&w| w == q as usize + 1);
        let (rows, cols) = incidence::geometric(&g, Points::P1, Lines::L1).weights();
        pass &= rows.iter().chain(&cols).all(|&w| w == q as usize);
    }
    report(
        7,
        "M(P,L) is (q+1)-regular and M(P1,L1) is q-regular for q in {2,...,9}",
        pass,
    );
}

fn field_axioms_hold(field: &Field) -> bool {
    let elems: Vec<_> = field.elements().collect();
    let mut ok = true;
    for &a in &elems {
        ok &= field.add(a, field.zero()) == a;
        ok &= field.mul(a, field.one()) == a;
        ok &= field.add(a, field.neg(a)).is_zero();
        if !a.is_zero() {
            ok &= field.mul(a, field.inv(a)).is_one();
        }
        for &b in &elems {
            ok &= field.add(a, b) == field.add(b, a);
            ok &= field.mul(a, b) == field.mul(b, a);
            for &c in &elems {
                ok &= field.add(field.add(a, b), c) == field.add(a, field.add(b, c));
                ok &= field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c));
                ok &= field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c));
            }
        }
    }
    ok
}

fn respanning_well_defined(q: u32) -> bool {
    let field = Field::new(q).unwrap();
    let g = Quadrangle::new(&field);
    g.lines().iter().all(|line| {
        let reference = PlueckerCoords::of_line(&field, line);
        let pts = line.points();
        pts.iter().enumerate().all(|(i, &a)| {
            pts[i + 1..].iter().all(|&b| {
                let u = g.points()[a].coords();
                let v = g.points()[b].coords();
                PlueckerCoords::from_span(&field, u, v) == Some(reference)
            })
        })
    })
}

fn naive_rank(m: &BitMatrix) -> usize {
    let mut rows: Vec<Vec<bool>> = (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect())
        .collect();
    let mut rank = 0;
    for c in 0..m.cols() {
        if let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c]) {
            rows.swap(rank, pivot);
            for r in 0..rows.len() {
                if r != rank && rows[r][c] {
                    let (a, b) = if r < rank {
                        let (lo, hi) = rows.split_at_mut(rank);
                        (&mut lo[r], &hi[0])
                    } else {
                        let (lo, hi) = rows.split_at_mut(r);
                        (&mut hi[0], &lo[rank])
                    };
                    for (x, y) in a.iter_mut().zip(b) {
                        *x ^= *y;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

#[test]
fn criterion_8_property_checks() {
    let mut pass = true;
    for q in [2u32, 3, 4, 5, 7, 8, 9] {
        pass &= field_axioms_hold(&Field::new(q).unwrap());
    }
    for q in [2u32, 3, 4] {
        pass &= respanning_well_defined(q);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(20240814);
    for _ in 0..20 {
        let mut m = BitMatrix::zeros(200, 200);
        for r in 0..200 {
            for c in 0..200 {
                if rng.gen::<bool>() {
                    m.set(r, c, true);
                }
            }
        }
        pass &= m.rank() == naive_rank(&m);
    }

    for q in [2u32, 3, 4, 5] {
        let field = Field::new(q).unwrap();
        let g = Quadrangle::new(&field);
        let exported: [BitMatrix; 3] = [
            incidence::geometric(&g, Points::P, Lines::L).matrix,
            incidence::geometric(&g, Points::P1, Lines::L1).matrix,
            incidence::h3q(&field).matrix,
        ];
        for m in &exported {
            let mut buf = Vec::new();
            ldpc::write_alist(m, &mut buf).unwrap();
            let back = ldpc::read_alist(&mut Cursor::new(buf)).unwrap();
            pass &= back.rows() == m.rows() && back.cols() == m.cols();
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    pass &= back.get(r, c) == m.get(r, c);
                }
            }
        }
    }
    report(
        8,
        "field axioms, Pluecker re-spanning, rank oracle, alist round-trips",
        pass,
    );
}

#[test]
fn criterion_9_ldpc_plumbing() {
    let field = Field::new(3).unwrap();
    let code = ldpc::code_from_h3q(&field, true);

    let mut pass = true;
    for channel in [Channel::Bsc(0.0), Channel::Bec(0.0)] {
        let r = ldpc::simulate(&code, channel, 25, 11);
        pass &= r.bit_errors == 0 && r.frame_errors == 0;
    }

    // converged implies zero syndrome across seeded noisy trials
    let (seed, trials, p) = (2024u64, 1000u64, 0.02f64);
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let mut word = BitVec::zeros(code.n());
        for b in 0..code.n() {
            if rng.gen::<f64>() < p {
                word.toggle(b);
            }
        }
        let (estimate, converged) = ldpc::bitflip_decode(&code, &word, ldpc::DEFAULT_MAX_ITERS);
        if converged {
            pass &= code.syndrome(&estimate).is_zero();
        }
    }
    report(
        9,
        "zero-noise simulation is clean; converged estimates have zero syndrome",
        pass,
    );
}
