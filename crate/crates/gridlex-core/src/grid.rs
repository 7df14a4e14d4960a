//! Rank arrays, subgrids, and the order-theoretic predicates on them.
//!
//! A `RankArray` is a d-dimensional injective array stored as integer
//! ranks `0..len-1`. Every property of interest here (monotone,
//! inconsistently monotone, lexicographic of some type) is invariant
//! under order-isomorphism, so ranks are a lossless stand-in for
//! injective reals.
//!
//! Conventions, fixed once for the whole crate:
//! - coordinates are 1-based;
//! - the flat layout is dimension-1-fastest: `offset(x) = sum (x_i - 1) * stride_i`
//!   with `stride_1 = 1` and `stride_i = dims_1 * ... * dims_{i-1}`;
//! - in two dimensions, dimension 1 runs left-to-right and dimension 2
//!   bottom-to-top, so the flat list reads a matrix bottom row first.

use crate::error::{Error, Result};

/// Direction of a strictly monotone line, `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn from_i8(v: i8) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Pos),
            -1 => Ok(Sign::Neg),
            _ => Err(Error::BadParameter(format!("sign must be +1 or -1, got {v}"))),
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Pos => "+",
            Sign::Neg => "-",
        })
    }
}

/// Per-dimension direction vector of a monotone array.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonotonicityPattern {
    pub signs: Vec<Sign>,
}

impl MonotonicityPattern {
    pub fn all_pos(d: usize) -> Self {
        MonotonicityPattern { signs: vec![Sign::Pos; d] }
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Encodes the pattern as a color id in `0..2^d`; bit `i` is set when
    /// dimension `i + 1` decreases.
    pub fn color_id(&self) -> usize {
        self.signs
            .iter()
            .enumerate()
            .fold(0, |acc, (i, s)| acc | (usize::from(*s == Sign::Neg) << i))
    }

    pub fn from_color_id(id: usize, d: usize) -> Self {
        let signs = (0..d)
            .map(|i| if id >> i & 1 == 1 { Sign::Neg } else { Sign::Pos })
            .collect();
        MonotonicityPattern { signs }
    }
}

impl std::fmt::Display for MonotonicityPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.signs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}1")?;
        }
        write!(f, ")")
    }
}

/// A lexicographic order on grid cells: coordinates are compared in
/// priority order `sigma(1), sigma(2), ...`, each negated when its sign
/// is `-1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LexType {
    /// Permutation of `1..=d`; `sigma[0]` is the highest-priority dimension.
    pub sigma: Vec<usize>,
    /// Signs indexed by dimension id (`signs[i]` belongs to dimension `i + 1`).
    pub signs: Vec<Sign>,
}

impl LexType {
    pub fn new(sigma: Vec<usize>, signs: Vec<Sign>) -> Result<Self> {
        let d = sigma.len();
        if signs.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: signs.len() });
        }
        let mut seen = vec![false; d];
        for &s in &sigma {
            if s == 0 || s > d || seen[s - 1] {
                return Err(Error::BadParameter(format!(
                    "sigma must be a permutation of 1..={d}, got {sigma:?}"
                )));
            }
            seen[s - 1] = true;
        }
        Ok(LexType { sigma, signs })
    }

    /// Type-sigma order with all signs `+1`.
    pub fn of_sigma(sigma: Vec<usize>) -> Result<Self> {
        let d = sigma.len();
        LexType::new(sigma, vec![Sign::Pos; d])
    }

    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    /// Signed-permuted lexicographic comparison of two cells.
    pub fn cmp_points(&self, a: &[usize], b: &[usize]) -> std::cmp::Ordering {
        for &dim in &self.sigma {
            let (x, y) = (a[dim - 1], b[dim - 1]);
            let ord = match self.signs[dim - 1] {
                Sign::Pos => x.cmp(&y),
                Sign::Neg => y.cmp(&x),
            };
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    }

    /// Every (sigma, signs) pair for dimension `d`, sigma in lexicographic
    /// order and sign vectors by ascending mask (all-`+1` first, dimension 1
    /// in the least significant bit).
    pub fn enumerate_all(d: usize) -> Vec<LexType> {
        let mut out = Vec::new();
        let mut sigma: Vec<usize> = (1..=d).collect();
        loop {
            for mask in 0usize..(1 << d) {
                let signs = (0..d)
                    .map(|i| if mask >> i & 1 == 1 { Sign::Neg } else { Sign::Pos })
                    .collect();
                out.push(LexType { sigma: sigma.clone(), signs });
            }
            if !next_permutation(&mut sigma) {
                break;
            }
        }
        out
    }
}

impl std::fmt::Display for LexType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "sigma=(")?;
        for (i, s) in self.sigma.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ") signs=(")?;
        for (i, s) in self.signs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

fn next_permutation(arr: &mut [usize]) -> bool {
    if arr.len() < 2 {
        return false;
    }
    let mut i = arr.len() - 1;
    while i > 0 && arr[i - 1] >= arr[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = arr.len() - 1;
    while arr[j] <= arr[i - 1] {
        j -= 1;
    }
    arr.swap(i - 1, j);
    arr[i..].reverse();
    true
}

/// Per-dimension strictly increasing index lists selecting a subarray.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgrid {
    /// One strictly increasing, nonempty list of 1-based indices per dimension.
    pub indices: Vec<Vec<usize>>,
}

impl Subgrid {
    pub fn new(indices: Vec<Vec<usize>>) -> Result<Self> {
        for (i, list) in indices.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::InvalidSubgrid(format!("dimension {} has no indices", i + 1)));
            }
            if !list.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidSubgrid(format!(
                    "dimension {} indices not strictly increasing: {list:?}",
                    i + 1
                )));
            }
            if list[0] == 0 {
                return Err(Error::InvalidSubgrid("indices are 1-based".into()));
            }
        }
        Ok(Subgrid { indices })
    }

    /// The subgrid selecting an entire grid of the given dims.
    pub fn full(dims: &[usize]) -> Self {
        Subgrid { indices: dims.iter().map(|&n| (1..=n).collect()).collect() }
    }

    /// The subgrid selecting the first `n` indices in every dimension.
    pub fn prefix(d: usize, n: usize) -> Self {
        Subgrid { indices: vec![(1..=n).collect(); d] }
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.indices.iter().map(Vec::len).collect()
    }

    pub fn check_against(&self, dims: &[usize]) -> Result<()> {
        if self.indices.len() != dims.len() {
            return Err(Error::DimensionMismatch { expected: dims.len(), got: self.indices.len() });
        }
        for (i, (list, &n)) in self.indices.iter().zip(dims).enumerate() {
            if *list.last().unwrap() > n {
                return Err(Error::InvalidSubgrid(format!(
                    "dimension {} index {} exceeds size {}",
                    i + 1,
                    list.last().unwrap(),
                    n
                )));
            }
        }
        Ok(())
    }

    /// Resolves `inner` (a subgrid of the array selected by `self`) into
    /// host coordinates.
    pub fn compose(&self, inner: &Subgrid) -> Subgrid {
        assert_eq!(self.dim(), inner.dim());
        let indices = self
            .indices
            .iter()
            .zip(&inner.indices)
            .map(|(outer, sel)| sel.iter().map(|&j| outer[j - 1]).collect())
            .collect();
        Subgrid { indices }
    }
}

/// A d-dimensional injective array represented by the ranks `0..len-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankArray {
    dims: Vec<usize>,
    ranks: Vec<usize>,
}

impl RankArray {
    pub fn new(dims: Vec<usize>, ranks: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::BadDims(dims));
        }
        let len: usize = dims.iter().product();
        if ranks.len() != len {
            return Err(Error::NonPermutationRanks { expected: len, got: ranks.len() });
        }
        let mut seen = vec![false; len];
        for &r in &ranks {
            if r >= len || seen[r] {
                return Err(Error::NonPermutationRanks { expected: len, got: ranks.len() });
            }
            seen[r] = true;
        }
        Ok(RankArray { dims, ranks })
    }

    /// Builds the array whose cells, sorted by `cmp`, receive ranks 0,1,2,...
    pub fn from_order<F>(dims: Vec<usize>, mut cmp: F) -> Result<Self>
    where
        F: FnMut(&[usize], &[usize]) -> std::cmp::Ordering,
    {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::BadDims(dims));
        }
        let len: usize = dims.iter().product();
        let mut offsets: Vec<usize> = (0..len).collect();
        let points: Vec<Vec<usize>> = {
            let tmp = RankArray { dims: dims.clone(), ranks: vec![0; len] };
            (0..len).map(|o| tmp.point_of(o)).collect()
        };
        offsets.sort_by(|&a, &b| cmp(&points[a], &points[b]));
        let mut ranks = vec![0; len];
        for (rank, &off) in offsets.iter().enumerate() {
            ranks[off] = rank;
        }
        Ok(RankArray { dims, ranks })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn min_dim(&self) -> usize {
        *self.dims.iter().min().unwrap()
    }

    pub fn stride(&self, dim: usize) -> usize {
        self.dims[..dim - 1].iter().product()
    }

    /// Flat offset of a 1-based point.
    pub fn offset_of(&self, point: &[usize]) -> usize {
        debug_assert_eq!(point.len(), self.dims.len());
        let mut off = 0;
        let mut stride = 1;
        for (x, &n) in point.iter().zip(&self.dims) {
            debug_assert!(*x >= 1 && *x <= n);
            off += (x - 1) * stride;
            stride *= n;
        }
        off
    }

    /// 1-based point of a flat offset.
    pub fn point_of(&self, mut offset: usize) -> Vec<usize> {
        let mut point = Vec::with_capacity(self.dims.len());
        for &n in &self.dims {
            point.push(offset % n + 1);
            offset /= n;
        }
        point
    }

    pub fn rank_at(&self, point: &[usize]) -> usize {
        self.ranks[self.offset_of(point)]
    }

    /// Offsets sorted by rank (the inverse permutation).
    pub fn offsets_by_rank(&self) -> Vec<usize> {
        let mut inv = vec![0; self.ranks.len()];
        for (off, &r) in self.ranks.iter().enumerate() {
            inv[r] = off;
        }
        inv
    }

    /// Restriction to a subgrid, re-ranked to `0..m-1` preserving relative order.
    pub fn restrict(&self, sub: &Subgrid) -> Result<RankArray> {
        sub.check_against(&self.dims)?;
        let shape = sub.shape();
        let m: usize = shape.iter().product();
        let mut selected: Vec<(usize, usize)> = Vec::with_capacity(m);
        let mut cursor = vec![0usize; sub.dim()];
        let mut point = vec![0usize; sub.dim()];
        for sub_off in 0..m {
            for (i, &c) in cursor.iter().enumerate() {
                point[i] = sub.indices[i][c];
            }
            selected.push((self.rank_at(&point), sub_off));
            // odometer, dimension 1 fastest
            for (c, &s) in cursor.iter_mut().zip(&shape) {
                *c += 1;
                if *c < s {
                    break;
                }
                *c = 0;
            }
        }
        selected.sort_unstable();
        let mut ranks = vec![0; m];
        for (new_rank, &(_, sub_off)) in selected.iter().enumerate() {
            ranks[sub_off] = new_rank;
        }
        Ok(RankArray { dims: shape, ranks })
    }

    /// The (d-1)-dimensional re-ranked slice at `dim = index`, with `dim`
    /// removed. Requires `d >= 2`.
    pub fn slice_at(&self, dim: usize, index: usize) -> RankArray {
        debug_assert!(self.dim() >= 2 && dim >= 1 && dim <= self.dim());
        debug_assert!(index >= 1 && index <= self.dims[dim - 1]);
        let mut indices: Vec<Vec<usize>> =
            self.dims.iter().map(|&n| (1..=n).collect()).collect();
        indices[dim - 1] = vec![index];
        let sliced = self
            .restrict(&Subgrid { indices })
            .expect("slice subgrid is valid");
        // dropping a size-1 dimension leaves flat offsets untouched
        let mut dims = sliced.dims;
        dims.remove(dim - 1);
        RankArray { dims, ranks: sliced.ranks }
    }

    /// Iterates all axis-parallel lines along `dim` as vectors of flat offsets.
    pub(crate) fn lines_along(&self, dim: usize) -> Vec<Vec<usize>> {
        let n = self.dims[dim - 1];
        let stride = self.stride(dim);
        let total = self.len();
        let mut lines = Vec::with_capacity(total / n);
        for base in 0..total {
            // bases are the cells with coordinate 1 along `dim`
            if !(base / stride).is_multiple_of(n) {
                continue;
            }
            lines.push((0..n).map(|k| base + k * stride).collect());
        }
        lines
    }
}

/// Direction of a strictly monotone sequence of distinct values.
fn line_direction(vals: impl Iterator<Item = usize> + Clone) -> Option<Sign> {
    let mut prev: Option<usize> = None;
    let mut dir: Option<Sign> = None;
    for v in vals {
        if let Some(p) = prev {
            let step = if v > p { Sign::Pos } else { Sign::Neg };
            match dir {
                None => dir = Some(step),
                Some(d) if d != step => return None,
                _ => {}
            }
        }
        prev = Some(v);
    }
    // length-1 lines count as increasing
    Some(dir.unwrap_or(Sign::Pos))
}

/// True iff rank increases along every unit step in every dimension.
pub fn is_increasing(array: &RankArray) -> bool {
    for dim in 1..=array.dim() {
        let stride = array.stride(dim);
        let n = array.dims()[dim - 1];
        for off in 0..array.len() {
            if (off / stride) % n + 1 < n && array.ranks()[off] >= array.ranks()[off + stride] {
                return false;
            }
        }
    }
    true
}

/// The per-dimension sign vector if the array is monotone, else `None`.
///
/// Dimensions of size 1 get sign `+1`.
pub fn monotone_pattern(array: &RankArray) -> Option<MonotonicityPattern> {
    let mut signs = Vec::with_capacity(array.dim());
    for dim in 1..=array.dim() {
        if array.dims()[dim - 1] == 1 {
            signs.push(Sign::Pos);
            continue;
        }
        let mut dim_sign: Option<Sign> = None;
        for line in array.lines_along(dim) {
            let dir = line_direction(line.iter().map(|&o| array.ranks()[o]))?;
            match dim_sign {
                None => dim_sign = Some(dir),
                Some(s) if s != dir => return None,
                _ => {}
            }
        }
        signs.push(dim_sign.unwrap_or(Sign::Pos));
    }
    Some(MonotonicityPattern { signs })
}

/// True iff every axis-parallel line is strictly monotone, directions free.
pub fn is_inconsistently_monotone(array: &RankArray) -> bool {
    (1..=array.dim()).all(|dim| {
        array
            .lines_along(dim)
            .iter()
            .all(|line| line_direction(line.iter().map(|&o| array.ranks()[o])).is_some())
    })
}

/// The monotonicity pattern at a point: sign of each line through it.
///
/// Errors when some line through the point is not strictly monotone.
pub fn pattern_at(array: &RankArray, point: &[usize]) -> Result<MonotonicityPattern> {
    if point.len() != array.dim() {
        return Err(Error::DimensionMismatch { expected: array.dim(), got: point.len() });
    }
    let base = array.offset_of(point);
    let mut signs = Vec::with_capacity(array.dim());
    for dim in 1..=array.dim() {
        let n = array.dims()[dim - 1];
        if n == 1 {
            signs.push(Sign::Pos);
            continue;
        }
        let stride = array.stride(dim);
        let start = base - (point[dim - 1] - 1) * stride;
        let vals = (0..n).map(|k| array.ranks()[start + k * stride]);
        match line_direction(vals) {
            Some(s) => signs.push(s),
            None => return Err(Error::NotApplicable(point.to_vec())),
        }
    }
    Ok(MonotonicityPattern { signs })
}

/// True iff the array's values are ordered exactly by `lt`'s signed-permuted
/// lexicographic order on coordinates.
pub fn lex_type_check(array: &RankArray, lt: &LexType) -> Result<bool> {
    if lt.dim() != array.dim() {
        return Err(Error::DimensionMismatch { expected: array.dim(), got: lt.dim() });
    }
    let by_rank = array.offsets_by_rank();
    let mut prev = array.point_of(by_rank[0]);
    for &off in &by_rank[1..] {
        let next = array.point_of(off);
        if lt.cmp_points(&prev, &next) != std::cmp::Ordering::Less {
            return Ok(false);
        }
        prev = next;
    }
    Ok(true)
}

/// Finds a `LexType` the array satisfies, or `None`.
///
/// When every dimension has size >= 2 the pair is unique. Size-1 dimensions
/// are canonicalized: their sign is `+1` and the lexicographically smallest
/// valid sigma (smallest sign mask next) wins.
pub fn detect_lex_type(array: &RankArray) -> Option<LexType> {
    let d = array.dim();
    for lt in LexType::enumerate_all(d) {
        if lt
            .signs
            .iter()
            .enumerate()
            .any(|(i, &s)| s == Sign::Neg && array.dims()[i] == 1)
        {
            continue;
        }
        if lex_type_check(array, &lt).expect("dimension checked") {
            return Some(lt);
        }
    }
    None
}

/// Records which dimensions [`normalize_to_increasing`] reflected so that
/// subgrids found in the normalized array can be pulled back.
#[derive(Debug, Clone)]
pub struct ReflectionMap {
    dims: Vec<usize>,
    signs: Vec<Sign>,
}

impl ReflectionMap {
    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// Maps a subgrid of the normalized array back to the source array.
    pub fn pull_back(&self, sub: &Subgrid) -> Subgrid {
        let indices = sub
            .indices
            .iter()
            .zip(self.signs.iter().zip(&self.dims))
            .map(|(list, (&sign, &n))| match sign {
                Sign::Pos => list.clone(),
                Sign::Neg => {
                    let mut mapped: Vec<usize> = list.iter().map(|&i| n + 1 - i).collect();
                    mapped.reverse();
                    mapped
                }
            })
            .collect();
        Subgrid { indices }
    }
}

/// Reflects every dimension with sign `-1` so a monotone array becomes
/// increasing. Errors unless the array is monotone with exactly `pattern`.
#[allow(clippy::needless_range_loop)]
pub fn normalize_to_increasing(
    array: &RankArray,
    pattern: &MonotonicityPattern,
) -> Result<(RankArray, ReflectionMap)> {
    if pattern.len() != array.dim() {
        return Err(Error::DimensionMismatch { expected: array.dim(), got: pattern.len() });
    }
    match monotone_pattern(array) {
        Some(p) if p == *pattern => {}
        _ => return Err(Error::PatternMismatch),
    }
    let map =
        ReflectionMap { dims: array.dims().to_vec(), signs: pattern.signs.clone() };
    let len = array.len();
    let mut ranks = vec![0; len];
    for off in 0..len {
        let mut point = array.point_of(off);
        for (i, x) in point.iter_mut().enumerate() {
            if pattern.signs[i] == Sign::Neg {
                *x = array.dims()[i] + 1 - *x;
            }
        }
        ranks[off] = array.rank_at(&point);
    }
    let out = RankArray { dims: array.dims().to_vec(), ranks };
    debug_assert!(is_increasing(&out));
    Ok((out, map))
}
