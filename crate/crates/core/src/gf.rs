//! Dense linear algebra over a prime field GF(p).
//!
//! Everything in the sequence universe is eventually reduced to finite
//! windows of coordinates, and on a window every subgroup is a subspace of
//! GF(p)^n.  Vectors are plain `Vec<u32>` with entries in `0..p`.

/// Arithmetic in GF(p) for a word-size prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u32,
}

impl Field {
    /// Creates the field, rejecting non-primes.
    pub fn new(p: u32) -> Option<Self> {
        if is_prime(p) {
            Some(Self { p })
        } else {
            None
        }
    }

    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        self.add(a, self.p - b % self.p)
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.p - a % self.p) % self.p
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Reduces an arbitrary signed integer into `0..p`.
    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in GF({})", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// `dst += c * src`, entrywise.
    pub fn axpy(self, dst: &mut [u32], c: u32, src: &[u32]) {
        if c == 0 {
            return;
        }
        for (d, s) in dst.iter_mut().zip(src) {
            if *s != 0 {
                *d = self.add(*d, self.mul(c, *s));
            }
        }
    }

    pub fn scale(self, v: &mut [u32], c: u32) {
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Which end of a vector counts as its leading coordinate during elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotOrder {
    /// Pivot at the lowest nonzero coordinate.
    Low,
    /// Pivot at the highest nonzero coordinate.
    High,
}

/// Fully reduced echelon form.  Returns the nonzero rows (each with pivot
/// coefficient 1) sorted by pivot position in the chosen order, together with
/// their pivot columns.
pub fn rref(f: Field, rows: Vec<Vec<u32>>, ncols: usize, order: PivotOrder) -> (Vec<Vec<u32>>, Vec<usize>) {
    let mut rows: Vec<Vec<u32>> = rows.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    let cols: Box<dyn Iterator<Item = usize>> = match order {
        PivotOrder::Low => Box::new(0..ncols),
        PivotOrder::High => Box::new((0..ncols).rev()),
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in cols {
        if r == rows.len() {
            break;
        }
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let inv = f.inv(rows[r][c]);
        f.scale(&mut rows[r], inv);
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row[c] != 0 {
                let c0 = f.neg(row[c]);
                f.axpy(row, c0, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// A subspace of GF(p)^n kept as a reduced echelon basis (low pivots).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub field: Field,
    pub ncols: usize,
    pub basis: Vec<Vec<u32>>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(field: Field, ncols: usize, vectors: Vec<Vec<u32>>) -> Self {
        debug_assert!(vectors.iter().all(|v| v.len() == ncols));
        let (basis, pivots) = rref(field, vectors, ncols, PivotOrder::Low);
        Self { field, ncols, basis, pivots }
    }

    pub fn zero(field: Field, ncols: usize) -> Self {
        Self { field, ncols, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: Field, ncols: usize) -> Self {
        let basis = (0..ncols)
            .map(|i| {
                let mut v = vec![0; ncols];
                v[i] = 1;
                v
            })
            .collect();
        Self { field, ncols, basis, pivots: (0..ncols).collect() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &mut [u32]) {
        for (row, &c) in self.basis.iter().zip(&self.pivots) {
            if v[c] != 0 {
                let k = self.field.neg(v[c]);
                self.field.axpy(v, k, row);
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.field, self.ncols, vs)
    }

    /// The annihilator `{x : <b, x> = 0 for every basis vector b}`.
    pub fn annihilator(&self) -> Subspace {
        let f = self.field;
        let n = self.ncols;
        let free: Vec<usize> = (0..n).filter(|c| !self.pivots.contains(c)).collect();
        let mut out = Vec::with_capacity(free.len());
        for &j in &free {
            let mut x = vec![0; n];
            x[j] = 1;
            for (row, &c) in self.basis.iter().zip(&self.pivots) {
                x[c] = f.neg(row[j]);
            }
            out.push(x);
        }
        Subspace::span(f, n, out)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// Image under the coordinate projection onto `cols` (in that order).
    pub fn project(&self, cols: &[usize]) -> Subspace {
        let vs = self.basis.iter().map(|v| cols.iter().map(|&c| v[c]).collect()).collect();
        Subspace::span(self.field, cols.len(), vs)
    }

    /// Projection onto a contiguous range of coordinates.
    pub fn project_range(&self, start: usize, end: usize) -> Subspace {
        let cols: Vec<usize> = (start..end).collect();
        self.project(&cols)
    }

    /// Image under the linear map whose `i`-th output coordinate is `<rows[i], x>`.
    pub fn map(&self, rows: &[Vec<u32>]) -> Subspace {
        let f = self.field;
        let vs = self.basis.iter().map(|v| rows.iter().map(|r| dot(f, r, v)).collect()).collect();
        Subspace::span(f, rows.len(), vs)
    }
}

pub fn dot(f: Field, a: &[u32], b: &[u32]) -> u32 {
    let mut s = 0u64;
    let p = f.p() as u64;
    for (x, y) in a.iter().zip(b) {
        if *x != 0 && *y != 0 {
            s = (s + *x as u64 * *y as u64) % p;
        }
    }
    s as u32
}

/// Solution space of the homogeneous system `rows · x = 0`.
pub fn nullspace(f: Field, rows: Vec<Vec<u32>>, ncols: usize) -> Subspace {
    Subspace::span(f, ncols, rows).annihilator()
}
