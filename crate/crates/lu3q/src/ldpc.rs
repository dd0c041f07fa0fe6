//! LDPC plumbing over the LU(3,q) matrices: alist import/export, exact code
//! dimension, reference hard-decision decoders, and a seeded channel
//! simulator.
//!
//! The decoders are deliberately simple reference implementations: a
//! Gallager-B bit-flipping decoder for the binary symmetric channel and a
//! peeling decoder for the binary erasure channel. Simulation transmits the
//! zero codeword — sufficient for linear codes over symmetric channels —
//! and derives every trial's noise deterministically from (seed, trial
//! index), so results are reproducible and trials could be tallied in any
//! order.

use crate::field::Field;
use crate::gf2::{BitMatrix, BitVec};
use crate::incidence;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

/// Iteration cap used by [`simulate`] for the bit-flipping decoder.
pub const DEFAULT_MAX_ITERS: usize = 50;

/// A binary linear code presented by a parity-check matrix.
#[derive(Debug, Clone)]
pub struct CodeSpec {
    h: BitMatrix,
    k: usize,
}

impl CodeSpec {
    /// Wraps a parity-check matrix and computes the exact dimension
    /// k = n - rank(H).
    pub fn from_matrix(h: BitMatrix) -> CodeSpec {
        let k = h.cols() - h.rank();
        CodeSpec { h, k }
    }

    pub fn h(&self) -> &BitMatrix {
        &self.h
    }

    /// Block length: the number of columns of H.
    pub fn n(&self) -> usize {
        self.h.cols()
    }

    /// Exact code dimension.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of parity checks (rows of H, not necessarily independent).
    pub fn checks(&self) -> usize {
        self.h.rows()
    }

    /// H·word over GF(2). Panics if the word length differs from n.
    pub fn syndrome(&self, word: &BitVec) -> BitVec {
        assert_eq!(
            word.len(),
            self.n(),
            "word length must equal the block length"
        );
        let mut syn = BitVec::zeros(self.checks());
        for r in 0..self.checks() {
            syn.set(r, self.h.row_dot(r, word));
        }
        syn
    }

    pub fn is_codeword(&self, word: &BitVec) -> bool {
        self.syndrome(word).is_zero()
    }
}

/// The LU(3,q) code: parity checks from H(3,q), transposed when
/// `transpose` is set (the customary orientation). Both orientations have
/// block length q^3 and, since H(3,q) is square, the same dimension.
pub fn code_from_h3q(field: &Field, transpose: bool) -> CodeSpec {
    let h = incidence::h3q(field).matrix;
    CodeSpec::from_matrix(if transpose { h.transpose() } else { h })
}

/// Errors raised by the alist reader and writer.
#[derive(Debug)]
pub enum AlistError {
    Io {
        path: Option<PathBuf>,
        source: std::io::Error,
    },
    /// The alist format cannot express rows or columns of weight zero.
    ZeroMatrix,
    Parse {
        line: usize,
        msg: String,
    },
}

impl fmt::Display for AlistError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlistError::Io {
                path: Some(p),
                source,
            } => {
                write!(f, "alist I/O error on {}: {source}", p.display())
            }
            AlistError::Io { path: None, source } => write!(f, "alist I/O error: {source}"),
            AlistError::ZeroMatrix => {
                write!(
                    f,
                    "alist cannot represent a matrix with an all-zero row or column"
                )
            }
            AlistError::Parse { line, msg } => write!(f, "alist parse error at line {line}: {msg}"),
        }
    }
}

impl std::error::Error for AlistError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            AlistError::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

impl From<std::io::Error> for AlistError {
    fn from(source: std::io::Error) -> AlistError {
        AlistError::Io { path: None, source }
    }
}

/// Writes `m` in the standard alist text format: "n m" (columns, rows),
/// the maximal column and row weights, the per-column and per-row weight
/// lists, then for every column its 1-based row indices zero-padded to the
/// maximal column weight, and for every row its 1-based column indices
/// likewise padded.
pub fn write_alist(m: &BitMatrix, out: &mut impl Write) -> Result<(), AlistError> {
    let col_weights: Vec<usize> = (0..m.cols()).map(|c| m.col_weight(c)).collect();
    let row_weights: Vec<usize> = (0..m.rows()).map(|r| m.row_weight(r)).collect();
    let max_col = col_weights.iter().copied().max().unwrap_or(0);
    let max_row = row_weights.iter().copied().max().unwrap_or(0);
    if col_weights.contains(&0) || row_weights.contains(&0) {
        return Err(AlistError::ZeroMatrix);
    }

    let join = |v: &[String]| v.join(" ");
    writeln!(out, "{} {}", m.cols(), m.rows())?;
    writeln!(out, "{max_col} {max_row}")?;
    let fmt_weights = |ws: &[usize]| join(&ws.iter().map(|w| w.to_string()).collect::<Vec<_>>());
    writeln!(out, "{}", fmt_weights(&col_weights))?;
    writeln!(out, "{}", fmt_weights(&row_weights))?;
    for c in 0..m.cols() {
        let mut entries: Vec<String> = m
            .column(c)
            .iter_ones()
            .map(|r| (r + 1).to_string())
            .collect();
        entries.resize(max_col, "0".to_string());
        writeln!(out, "{}", join(&entries))?;
    }
    for r in 0..m.rows() {
        let mut entries: Vec<String> = m.row(r).iter_ones().map(|c| (c + 1).to_string()).collect();
        entries.resize(max_row, "0".to_string());
        writeln!(out, "{}", join(&entries))?;
    }
    Ok(())
}

/// Reads a matrix in alist format, validating the weight lists and the
/// agreement between the column and row index sections.
pub fn read_alist(input: &mut impl BufRead) -> Result<BitMatrix, AlistError> {
    let mut lines = Vec::new();
    for line in input.lines() {
        lines.push(line?);
    }
    let mut lineno = 0usize;
    let mut numbers = |expect: Option<usize>| -> Result<Vec<usize>, AlistError> {
        let raw = lines.get(lineno).ok_or(AlistError::Parse {
            line: lineno + 1,
            msg: "unexpected end of file".into(),
        })?;
        lineno += 1;
        let parsed: Result<Vec<usize>, _> =
            raw.split_whitespace().map(|t| t.parse::<usize>()).collect();
        let values = parsed.map_err(|e| AlistError::Parse {
            line: lineno,
            msg: format!("bad integer: {e}"),
        })?;
        if let Some(n) = expect {
            if values.len() != n {
                return Err(AlistError::Parse {
                    line: lineno,
                    msg: format!("expected {n} values, found {}", values.len()),
                });
            }
        }
        Ok(values)
    };

    let header = numbers(Some(2))?;
    let (n, m) = (header[0], header[1]);
    let maxima = numbers(Some(2))?;
    let (max_col, max_row) = (maxima[0], maxima[1]);
    let col_weights = numbers(Some(n))?;
    let row_weights = numbers(Some(m))?;

    let mut matrix = BitMatrix::zeros(m, n);
    for c in 0..n {
        let entries = numbers(Some(max_col))?;
        let nonzero: Vec<usize> = entries.iter().copied().filter(|&e| e != 0).collect();
        if nonzero.len() != col_weights[c] {
            return Err(AlistError::Parse {
                line: lineno,
                msg: format!("column {} weight mismatch", c + 1),
            });
        }
        for e in nonzero {
            if e > m {
                return Err(AlistError::Parse {
                    line: lineno,
                    msg: format!("row index {e} out of range"),
                });
            }
            matrix.set(e - 1, c, true);
        }
    }
    for r in 0..m {
        let entries = numbers(Some(max_row))?;
        let nonzero: Vec<usize> = entries.iter().copied().filter(|&e| e != 0).collect();
        if nonzero.len() != row_weights[r] {
            return Err(AlistError::Parse {
                line: lineno,
                msg: format!("row {} weight mismatch", r + 1),
            });
        }
        for e in nonzero {
            if e > n || !matrix.get(r, e - 1) {
                return Err(AlistError::Parse {
                    line: lineno,
                    msg: format!("row section disagrees with column section at row {}", r + 1),
                });
            }
        }
    }
    for r in 0..m {
        if matrix.row_weight(r) != row_weights[r] {
            return Err(AlistError::Parse {
                line: lineno,
                msg: format!("row {} weight disagrees with the column section", r + 1),
            });
        }
    }
    Ok(matrix)
}

fn attach_path(e: AlistError, path: &Path) -> AlistError {
    match e {
        AlistError::Io { path: None, source } => AlistError::Io {
            path: Some(path.to_path_buf()),
            source,
        },
        other => other,
    }
}

/// Writes the matrix to a file in alist format.
pub fn export_alist(m: &BitMatrix, path: &Path) -> Result<(), AlistError> {
    let file = File::create(path).map_err(|source| AlistError::Io {
        path: Some(path.to_path_buf()),
        source,
    })?;
    let mut out = BufWriter::new(file);
    write_alist(m, &mut out).map_err(|e| attach_path(e, path))?;
    out.flush().map_err(|source| AlistError::Io {
        path: Some(path.to_path_buf()),
        source,
    })
}

/// Reads a matrix from an alist file.
pub fn import_alist(path: &Path) -> Result<BitMatrix, AlistError> {
    let file = File::open(path).map_err(|source| AlistError::Io {
        path: Some(path.to_path_buf()),
        source,
    })?;
    read_alist(&mut BufReader::new(file)).map_err(|e| attach_path(e, path))
}

/// Gallager-B bit flipping: each round flips, in parallel, every bit for
/// which a strict majority of its checks is unsatisfied; ties never flip.
/// Stops when the syndrome is zero, when a round flips nothing, or after
/// `max_iters` rounds. Returns the estimate and whether its syndrome is
/// zero.
pub fn bitflip_decode(code: &CodeSpec, received: &BitVec, max_iters: usize) -> (BitVec, bool) {
    assert_eq!(
        received.len(),
        code.n(),
        "received word length must equal the block length"
    );
    assert!(max_iters >= 1, "at least one iteration is required");
    let degrees: Vec<usize> = (0..code.n()).map(|c| code.h.col_weight(c)).collect();
    let mut word = received.clone();
    for _ in 0..max_iters {
        let syn = code.syndrome(&word);
        if syn.is_zero() {
            return (word, true);
        }
        let mut unsat = vec![0usize; code.n()];
        for check in syn.iter_ones() {
            for bit in code.h.row(check).iter_ones() {
                unsat[bit] += 1;
            }
        }
        let flips: Vec<usize> = (0..code.n())
            .filter(|&b| 2 * unsat[b] > degrees[b])
            .collect();
        if flips.is_empty() {
            return (word, false);
        }
        for b in flips {
            word.toggle(b);
        }
    }
    let converged = code.syndrome(&word).is_zero();
    (word, converged)
}

/// Erasure peeling: while some check has exactly one erased participant,
/// solve that bit from the parity of the known ones. Returns the filled
/// word and the number of positions still erased at the fixpoint. Values at
/// erased input positions are ignored.
pub fn bec_peel_decode(code: &CodeSpec, received: &BitVec, erased: &BitVec) -> (BitVec, usize) {
    assert_eq!(
        received.len(),
        code.n(),
        "received word length must equal the block length"
    );
    assert_eq!(
        erased.len(),
        code.n(),
        "erasure mask length must equal the block length"
    );
    let mut word = received.clone();
    let mut mask = erased.clone();
    // normalize erased positions so the outcome never depends on their
    // input values
    let stale: Vec<usize> = mask.iter_ones().filter(|&b| word.get(b)).collect();
    for b in stale {
        word.set(b, false);
    }
    loop {
        let mut progress = false;
        for check in 0..code.checks() {
            let row = code.h.row(check);
            let erased_here: Vec<usize> =
                row.iter_ones().filter(|&b| mask.get(b)).take(2).collect();
            if let [lone] = erased_here[..] {
                let mut parity = false;
                for b in row.iter_ones() {
                    if b != lone && word.get(b) {
                        parity = !parity;
                    }
                }
                word.set(lone, parity);
                mask.set(lone, false);
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    let residual = mask.count_ones();
    (word, residual)
}

/// Memoryless binary channels with their single parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Channel {
    /// Binary symmetric channel with crossover probability p.
    Bsc(f64),
    /// Binary erasure channel with erasure probability eps.
    Bec(f64),
}

impl Channel {
    pub fn name(&self) -> &'static str {
        match self {
            Channel::Bsc(_) => "bsc",
            Channel::Bec(_) => "bec",
        }
    }

    pub fn param(&self) -> f64 {
        match self {
            Channel::Bsc(p) | Channel::Bec(p) => *p,
        }
    }
}

/// Tally of a simulation run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub channel: String,
    pub param: f64,
    pub trials: u64,
    pub seed: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
}

impl SimResult {
    pub fn to_csv(&self) -> String {
        format!(
            "channel,param,trials,seed,bit_errors,frame_errors\n{},{},{},{},{},{}\n",
            self.channel, self.param, self.trials, self.seed, self.bit_errors, self.frame_errors
        )
    }
}

/// Transmits the zero codeword `trials` times through the channel and
/// decodes — bit flipping for the BSC, peeling for the BEC. Trial t draws
/// its noise from a ChaCha8 generator seeded with `seed` on stream t, so a
/// given (seed, trials) pair always produces the same tally.
pub fn simulate(code: &CodeSpec, channel: Channel, trials: u64, seed: u64) -> SimResult {
    let p = channel.param();
    assert!(
        (0.0..=1.0).contains(&p),
        "channel parameter must lie in [0, 1]"
    );
    assert!(trials >= 1, "at least one trial is required");
    let n = code.n();
    let mut bit_errors = 0u64;
    let mut frame_errors = 0u64;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        match channel {
            Channel::Bsc(_) => {
                let mut word = BitVec::zeros(n);
                for b in 0..n {
                    if rng.gen::<f64>() < p {
                        word.toggle(b);
                    }
                }
                let (estimate, _) = bitflip_decode(code, &word, DEFAULT_MAX_ITERS);
                let wrong = estimate.count_ones() as u64;
                bit_errors += wrong;
                frame_errors += (wrong > 0) as u64;
            }
            Channel::Bec(_) => {
                let mut mask = BitVec::zeros(n);
                for b in 0..n {
                    if rng.gen::<f64>() < p {
                        mask.set(b, true);
                    }
                }
                let zero = BitVec::zeros(n);
                let (filled, residual) = bec_peel_decode(code, &zero, &mask);
                // peeling never guesses: every recovered bit is forced, so
                // only unresolved erasures count as bit errors
                debug_assert!(filled.is_zero());
                bit_errors += residual as u64;
                frame_errors += (residual > 0) as u64;
            }
        }
    }
    SimResult {
        channel: channel.name().to_string(),
        param: p,
        trials,
        seed,
        bit_errors,
        frame_errors,
    }
}
