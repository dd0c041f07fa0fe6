//! Bit-packed GF(2) vectors and matrices with exact rank computation.
//!
//! This is the engine behind every rank claim: Gaussian elimination with
//! word-parallel row XOR on `u64`-packed rows. Matrices are never mutated
//! by queries; `rank` and friends work on a copy.

/// Packed bit vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> BitVec {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// All-ones vector of the given length.
    pub fn ones(len: usize) -> BitVec {
        let mut v = BitVec::zeros(len);
        for w in v.words.iter_mut() {
            *w = !0;
        }
        v.clear_padding();
        v
    }

    pub fn from_indices(len: usize, ones: &[usize]) -> BitVec {
        let mut v = BitVec::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    fn clear_padding(&mut self) {
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        } else if self.len == 0 {
            self.words.clear();
        }
    }
}

/// Row-major bit-packed GF(2) matrix.
///
/// Trailing pad bits of every row are kept zero, so whole-word operations
/// (XOR, popcount) are always valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> BitMatrix {
        let stride = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> BitMatrix {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of range"
        );
        self.words[r * self.stride + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of range"
        );
        let mask = 1u64 << (c % 64);
        let w = &mut self.words[r * self.stride + c / 64];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        assert!(r < self.rows);
        BitVec {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn column(&self, c: usize) -> BitVec {
        assert!(c < self.cols);
        let mut v = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows, columns.len());
        for (c, v) in columns.iter().enumerate() {
            assert_eq!(v.len(), rows, "column {c} has wrong length");
            for r in v.iter_ones() {
                m.set(r, c, true);
            }
        }
        m
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn col_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    /// Parity of the intersection of row `r` with `v` (dot product over GF(2)).
    pub fn row_dot(&self, r: usize, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        self.row_words(r)
            .iter()
            .zip(&v.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Exact GF(2) rank by forward elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut work = self.words.clone();
        let stride = self.stride;
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let w = col / 64;
            let mask = 1u64 << (col % 64);
            let Some(pivot) = (rank..self.rows).find(|&r| work[r * stride + w] & mask != 0) else {
                continue;
            };
            if pivot != rank {
                for k in w..stride {
                    work.swap(pivot * stride + k, rank * stride + k);
                }
            }
            // Rows below `rank` are zero in every column before `col`, so the
            // XOR only needs words from `w` on.
            let (head, tail) = work.split_at_mut((rank + 1) * stride);
            let pivot_row = &head[rank * stride + w..(rank + 1) * stride];
            for r in 0..self.rows - rank - 1 {
                let row = &mut tail[r * stride + w..(r + 1) * stride];
                if row[0] & mask != 0 {
                    for (a, b) in row.iter_mut().zip(pivot_row) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Submatrix of the rows in `keep` (strictly increasing indices).
    pub fn restrict_rows(&self, keep: &[usize]) -> BitMatrix {
        for pair in keep.windows(2) {
            assert!(
                pair[0] < pair[1],
                "row selection must be strictly increasing"
            );
        }
        if let Some(&last) = keep.last() {
            assert!(
                last < self.rows,
                "row index {last} out of range {}",
                self.rows
            );
        }
        let mut m = BitMatrix::zeros(keep.len(), self.cols);
        for (i, &r) in keep.iter().enumerate() {
            let src = r * self.stride;
            let dst = i * m.stride;
            m.words[dst..dst + self.stride].copy_from_slice(&self.words[src..src + self.stride]);
        }
        m
    }

    /// Column concatenation `[self | other]`.
    pub fn stack_columns(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows, other.rows, "row count mismatch in stack_columns");
        let mut m = BitMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    m.set(r, c, true);
                }
            }
            for c in 0..other.cols {
                if other.get(r, c) {
                    m.set(r, self.cols + c, true);
                }
            }
        }
        m
    }

    /// Tests membership of `v` in the column space: rank([M | v]) = rank(M).
    pub fn in_column_space(&self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.rows, "vector length must equal row count");
        let extended =
            self.stack_columns(&BitMatrix::from_columns(self.rows, std::slice::from_ref(v)));
        extended.rank() == self.rank()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    m.set(c, r, true);
                }
            }
        }
        m
    }

    /// Dimension of the subspace of the column space vanishing outside the
    /// rows in `support` (sorted, deduplicated).
    ///
    /// Computed as rank(M) - rank(M restricted to the complement of the
    /// support): the restriction map on the column space has the restricted
    /// matrix's column space as image, and the sought subspace as kernel.
    pub fn kernel_support_dim(&self, support: &[usize]) -> usize {
        let mut in_support = vec![false; self.rows];
        for &r in support {
            assert!(r < self.rows, "support index {r} out of range");
            in_support[r] = true;
        }
        let complement: Vec<usize> = (0..self.rows).filter(|&r| !in_support[r]).collect();
        let full = self.rank();
        let restricted = self.restrict_rows(&complement).rank();
        debug_assert!(restricted <= full);
        full - restricted
    }
}

/// Incremental column-space builder: feeds vectors one at a time and tracks
/// which of them enlarge the span.
pub struct SpanBuilder {
    len: usize,
    /// Reduced basis vectors paired with their pivot positions.
    basis: Vec<(usize, BitVec)>,
}

impl SpanBuilder {
    pub fn new(len: usize) -> SpanBuilder {
        SpanBuilder {
            len,
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Reduces `v` against the current basis; if a nonzero remainder is left
    /// it joins the basis and the call returns true.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.len);
        let mut v = v.clone();
        for (pivot, b) in &self.basis {
            if v.get(*pivot) {
                v.xor_assign(b);
            }
        }
        let pivot = v.iter_ones().next();
        match pivot {
            Some(pivot) => {
                self.basis.push((pivot, v));
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.len);
        let mut v = v.clone();
        for (pivot, b) in &self.basis {
            if v.get(*pivot) {
                v.xor_assign(b);
            }
        }
        v.is_zero()
    }
}
