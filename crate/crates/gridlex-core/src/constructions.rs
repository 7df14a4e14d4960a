//! Generators: lexicographic arrays, the extremal blocks `g` and `h`, the
//! two-dimensional lower-bound array they combine into, and seeded random
//! (increasing) arrays for tests and experiments.

use crate::error::{Error, Result};
use crate::grid::{LexType, RankArray};
use crate::rng::SeededRng;

/// The unique array on `dims` whose cells, sorted by the signed-permuted
/// lexicographic order of `lt`, receive ranks 0,1,2,...
pub fn gen_lex(dims: &[usize], lt: &LexType) -> Result<RankArray> {
    if lt.dim() != dims.len() {
        return Err(Error::DimensionMismatch { expected: dims.len(), got: lt.dim() });
    }
    RankArray::from_order(dims.to_vec(), |a, b| lt.cmp_points(a, b))
}

/// Strip-structured block of size `(n-1)(n-2) x (n-1)^2`.
///
/// Vertical strips of width `n-1` hold disjoint ascending value blocks;
/// inside a strip the order is lexicographic with dimension 2 most
/// significant. The result is increasing, contains no `(n-1) x 2` subarray
/// ordered dimension-1-first, and no `n x 2` subarray ordered
/// dimension-2-first.
pub fn gen_block_g(n: usize) -> Result<RankArray> {
    if n < 3 {
        return Err(Error::BadParameter(format!("block g needs n >= 3, got {n}")));
    }
    let width = (n - 1) * (n - 2);
    let height = (n - 1) * (n - 1);
    RankArray::from_order(vec![width, height], |a, b| {
        let strip_a = (a[0] - 1) / (n - 1);
        let strip_b = (b[0] - 1) / (n - 1);
        strip_a
            .cmp(&strip_b)
            .then(a[1].cmp(&b[1]))
            .then(a[0].cmp(&b[0]))
    })
}

/// Band-structured block of size `(n-1)^2 x (n-1)(n-2)`, the transpose-dual
/// of [`gen_block_g`]: horizontal bands of height `n-1`, ascending band
/// order, dimension 1 most significant inside a band.
pub fn gen_block_h(n: usize) -> Result<RankArray> {
    if n < 3 {
        return Err(Error::BadParameter(format!("block h needs n >= 3, got {n}")));
    }
    let width = (n - 1) * (n - 1);
    let height = (n - 1) * (n - 2);
    RankArray::from_order(vec![width, height], |a, b| {
        let band_a = (a[1] - 1) / (n - 1);
        let band_b = (b[1] - 1) / (n - 1);
        band_a
            .cmp(&band_b)
            .then(a[0].cmp(&b[0]))
            .then(a[1].cmp(&b[1]))
    })
}

/// Region labels of the lower-bound square, in ascending value order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Region {
    A1,
    A2,
    A3,
    A4,
    A5,
}

fn region_of(x: usize, y: usize, n: usize) -> Region {
    let i_end = (n - 1) * (n - 2);
    let j_end = (n - 1) * (n - 1);
    if x <= i_end {
        if y <= j_end {
            Region::A1
        } else {
            Region::A4
        }
    } else if x <= j_end {
        if y <= i_end {
            Region::A2
        } else if y <= j_end {
            Region::A3
        } else {
            Region::A4
        }
    } else if y <= i_end {
        Region::A2
    } else {
        Region::A5
    }
}

/// The `N x N` increasing array with `N = 2n^2 - 5n + 3` witnessing that an
/// `n x n` lexicographic subarray of either 2-D type need not appear.
///
/// Splits `[N]` into `I | J | K` with `|I| = |K| = (n-1)(n-2)` and
/// `|J| = n-1`; five regions tile the square, two copies each of the `g`
/// and `h` blocks around a small increasing center, with region value
/// blocks strictly ordered `A1 < A2 < A3 < A4 < A5`.
pub fn gen_f2_lower(n: usize) -> Result<RankArray> {
    if n < 3 {
        return Err(Error::BadParameter(format!("lower-bound array needs n >= 3, got {n}")));
    }
    let i_end = (n - 1) * (n - 2);
    let j_end = (n - 1) * (n - 1);
    let side = i_end + j_end;

    let g = gen_block_g(n)?;
    let h = gen_block_h(n)?;

    // Rank of a cell inside its region's local copy.
    let local = |x: usize, y: usize| -> (Region, usize) {
        match region_of(x, y, n) {
            Region::A1 => (Region::A1, g.rank_at(&[x, y])),
            Region::A2 => (Region::A2, h.rank_at(&[x - i_end, y])),
            Region::A3 => {
                // arbitrary increasing filling; fixed as dimension-1-first
                // lexicographic for determinism
                let (lx, ly) = (x - i_end, y - i_end);
                (Region::A3, (lx - 1) * (n - 1) + (ly - 1))
            }
            Region::A4 => (Region::A4, h.rank_at(&[x, y - j_end])),
            Region::A5 => (Region::A5, g.rank_at(&[x - j_end, y - i_end])),
        }
    };

    let sizes = [
        g.len(),          // A1
        h.len(),          // A2
        (n - 1) * (n - 1), // A3
        h.len(),          // A4
        g.len(),          // A5
    ];
    debug_assert_eq!(sizes.iter().sum::<usize>(), side * side);
    let mut base = [0usize; 5];
    for k in 1..5 {
        base[k] = base[k - 1] + sizes[k - 1];
    }

    let mut ranks = vec![0usize; side * side];
    for y in 1..=side {
        for x in 1..=side {
            let (region, local_rank) = local(x, y);
            ranks[(x - 1) + (y - 1) * side] = base[region as usize] + local_rank;
        }
    }
    RankArray::new(vec![side, side], ranks)
}

/// Seeded uniform permutation of ranks over `dims`.
pub fn gen_random(dims: &[usize], seed: u64) -> Result<RankArray> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::BadDims(dims.to_vec()));
    }
    let len = dims.iter().product();
    let mut ranks: Vec<usize> = (0..len).collect();
    SeededRng::new(seed).shuffle(&mut ranks);
    RankArray::new(dims.to_vec(), ranks)
}

/// Seeded random increasing array: a linear extension of the grid's
/// componentwise order, generated by repeatedly removing a uniformly chosen
/// currently-minimal cell.
///
/// The distribution is biased (minimal cells are equally likely at each
/// step, which does not weight extensions uniformly); it is a cheap source
/// of varied increasing arrays, not a uniform sampler.
#[allow(clippy::needless_range_loop)]
pub fn gen_random_increasing(dims: &[usize], seed: u64) -> Result<RankArray> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::BadDims(dims.to_vec()));
    }
    let len: usize = dims.iter().product();
    let probe = RankArray::new(dims.to_vec(), (0..len).collect())?;
    let d = dims.len();

    let mut rng = SeededRng::new(seed);
    let mut indegree = vec![0usize; len];
    for off in 0..len {
        let point = probe.point_of(off);
        indegree[off] = (0..d).filter(|&i| point[i] > 1).count();
    }
    // frontier kept sorted by offset for a canonical pick order
    let mut frontier: Vec<usize> =
        (0..len).filter(|&off| indegree[off] == 0).collect();
    let mut ranks = vec![0usize; len];
    for next_rank in 0..len {
        let pick = rng.below(frontier.len());
        let off = frontier.remove(pick);
        ranks[off] = next_rank;
        let point = probe.point_of(off);
        let mut stride = 1;
        for i in 0..d {
            if point[i] < dims[i] {
                let succ = off + stride;
                indegree[succ] -= 1;
                if indegree[succ] == 0 {
                    let pos = frontier.binary_search(&succ).unwrap_err();
                    frontier.insert(pos, succ);
                }
            }
            stride *= dims[i];
        }
    }
    RankArray::new(dims.to_vec(), ranks)
}
