//! Lexicographic subarray extraction from increasing arrays, and the
//! two-stage pipeline that handles arbitrary arrays by extracting a
//! monotone subarray first.
//!
//! The 2-D extractor is the anchor-coloring argument; higher dimensions
//! run a stack decomposition (the dominant-coordinate argument, or plain
//! slicing when the input is far below its size floor), solve the
//! layers, and pigeonhole the layers into agreement. Exactly-lexicographic
//! inputs that are too small for any pigeonhole are recognized directly as
//! a last resort, so structured inputs of any size succeed.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::extract::monotone::{
    es_monotone_subsequence, extract_monotone_2d, extract_monotone_3d, extract_monotone_d,
};
use crate::extract::{Direction, Extraction, StageFailure};
use crate::grid::{
    LexType, RankArray, Sign, Subgrid, detect_lex_type, is_increasing, normalize_to_increasing,
};

/// Output of the dominant-coordinate argument: a stack of congruent
/// (d-1)-dimensional subgrids at increasing heights along `dim`, with the
/// array's values strictly separated between consecutive heights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackDecomposition {
    /// The stacked dimension, 1-based.
    pub dim: usize,
    /// Index lists for the other d-1 dimensions in ascending dimension
    /// order, each of size m+1.
    pub bases: Vec<Vec<usize>>,
    /// Strictly increasing heights h_1 < ... < h_t along `dim`.
    pub heights: Vec<usize>,
}

impl StackDecomposition {
    /// Subgrid of the host array at height position `s`.
    pub fn layer_subgrid(&self, s: usize) -> Subgrid {
        let d = self.bases.len() + 1;
        let mut indices = Vec::with_capacity(d);
        let mut bi = 0;
        for dim in 1..=d {
            if dim == self.dim {
                indices.push(vec![self.heights[s]]);
            } else {
                indices.push(self.bases[bi].clone());
                bi += 1;
            }
        }
        Subgrid { indices }
    }
}

/// Probe coordinate `x_i[j]` within the local cube `[d*m]^d` (1-based).
fn probe_coord(d: usize, m: usize, i: usize, j: usize) -> usize {
    (((i + d - j - 1) % d) + 1) * m
}

/// The dominant-coordinate argument, run on the prefix cube
/// `[d^2*m*t]^d`: split into a lattice of translated cubes, color every
/// lattice point by which probe point carries the largest value, take the
/// majority color `i`, and read a column of `t` agreeing lattice points in
/// direction `i` as a stack of value-separated subgrids.
///
/// Requires an increasing array with every dimension at least `d^2*m*t`
/// and `d, m, t >= 2`. The separation postcondition is re-verified on the
/// actual values before returning.
#[allow(clippy::needless_range_loop)]
pub fn dominant_coordinate(array: &RankArray, m: usize, t: usize) -> Result<StackDecomposition> {
    let d = array.dim();
    if d < 2 || m < 2 || t < 2 {
        return Err(Error::BadParameter(format!(
            "dominant coordinate needs d, m, t >= 2 (d={d}, m={m}, t={t})"
        )));
    }
    let side = d * d * m * t;
    if let Some(&small) = array.dims().iter().find(|&&s| s < side) {
        return Err(Error::TooSmall(format!(
            "every dimension must be >= {side}, found {small}"
        )));
    }
    if !is_increasing(array) {
        return Err(Error::NotIncreasing);
    }

    // lattice of 0-based shifts {0, dm, ..., (dt-1)dm}^d
    let td = t * d;
    let step = d * m;
    let lattice_cells: usize = (0..d).map(|_| td).product();
    let mut colors = vec![0usize; lattice_cells];
    let mut counts = vec![0usize; d];
    let mut point = vec![0usize; d];
    for cell in 0..lattice_cells {
        let mut rem = cell;
        let mut shift = Vec::with_capacity(d);
        for _ in 0..d {
            shift.push((rem % td) * step);
            rem /= td;
        }
        let mut best = (0usize, 0usize); // (rank, color)
        for i in 1..=d {
            for j in 1..=d {
                point[j - 1] = shift[j - 1] + probe_coord(d, m, i, j);
            }
            let r = array.rank_at(&point);
            if i == 1 || r > best.0 {
                best = (r, i);
            }
        }
        colors[cell] = best.1;
        counts[best.1 - 1] += 1;
    }
    let dim = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i + 1)
        .unwrap();

    // first direction-`dim` lattice column with t entries of color `dim`,
    // columns ordered lexicographically by their fixed coordinates
    let mut fixed = vec![0usize; d - 1]; // lattice indices of dims != dim
    let column = 'scan: loop {
        // reconstruct the column's cell offsets
        let mut hits = Vec::new();
        for along in 0..td {
            let mut cell = 0;
            let mut mult = 1;
            let mut fi = 0;
            for j in 1..=d {
                let idx = if j == dim { along } else { fixed[fi] };
                if j != dim {
                    fi += 1;
                }
                cell += idx * mult;
                mult *= td;
            }
            if colors[cell] == dim {
                hits.push(along);
            }
        }
        if hits.len() >= t {
            break 'scan Some(hits[..t].to_vec());
        }
        // odometer over fixed coordinates, last coordinate fastest so the
        // scan follows lexicographic tuple order
        let mut carried = true;
        for fi in (0..d - 1).rev() {
            fixed[fi] += 1;
            if fixed[fi] < td {
                carried = false;
                break;
            }
            fixed[fi] = 0;
        }
        if carried {
            break 'scan None;
        }
    };
    let along_list = column.ok_or_else(|| {
        Error::PostconditionFailed("no lattice column attains the majority color".into())
    })?;

    // assemble bases from the first stack element, heights from the column
    let mut bases = Vec::with_capacity(d - 1);
    let mut fi = 0;
    for j in 1..=d {
        if j == dim {
            continue;
        }
        let shift = fixed[fi] * step;
        fi += 1;
        let lo = shift + probe_coord(d, m, dim, j);
        bases.push((lo..=lo + m).collect());
    }
    let heights: Vec<usize> =
        along_list.iter().map(|&a| a * step + m).collect();
    let stack = StackDecomposition { dim, bases, heights };

    // postcondition: consecutive layers have strictly separated values
    for s in 0..t - 1 {
        let (_, max_low) = layer_extremes(array, &stack, s)?;
        let (min_high, _) = layer_extremes(array, &stack, s + 1)?;
        if max_low >= min_high {
            return Err(Error::PostconditionFailed(format!(
                "layers {s} and {} overlap in value",
                s + 1
            )));
        }
    }
    Ok(stack)
}

/// (min rank, max rank) over a stack layer.
fn layer_extremes(
    array: &RankArray,
    stack: &StackDecomposition,
    s: usize,
) -> Result<(usize, usize)> {
    let sub = stack.layer_subgrid(s);
    sub.check_against(array.dims())?;
    let shape = sub.shape();
    let cells: usize = shape.iter().product();
    let mut cursor = vec![0usize; shape.len()];
    let mut point = vec![0usize; shape.len()];
    let (mut lo, mut hi) = (usize::MAX, 0usize);
    for _ in 0..cells {
        for (i, &c) in cursor.iter().enumerate() {
            point[i] = sub.indices[i][c];
        }
        let r = array.rank_at(&point);
        lo = lo.min(r);
        hi = hi.max(r);
        for (c, &sz) in cursor.iter_mut().zip(&shape) {
            *c += 1;
            if *c < sz {
                break;
            }
            *c = 0;
        }
    }
    Ok((lo, hi))
}

/// Internal stack form: like [`StackDecomposition`] but bases may be
/// rectangular (the slicing fallback keeps whole cross-sections).
#[derive(Debug, Clone)]
struct Stack {
    dim: usize,
    bases: Vec<Vec<usize>>,
    heights: Vec<usize>,
}

impl From<StackDecomposition> for Stack {
    fn from(s: StackDecomposition) -> Stack {
        Stack { dim: s.dim, bases: s.bases, heights: s.heights }
    }
}

/// Lattice parameters for a best-effort dominant-coordinate call:
/// the largest base size with t >= n layers that fits, if any.
fn lattice_params(array: &RankArray, n: usize, m_floor: usize) -> Option<(usize, usize)> {
    let d = array.dim();
    let min_dim = array.min_dim();
    let t_min = n.max(2);
    let m = min_dim / (d * d * t_min);
    if m < m_floor.max(2) {
        return None;
    }
    let t = min_dim / (d * d * m);
    Some((m, t))
}

/// Full-cross-section stack: a dimension whose slices occupy disjoint
/// ascending value ranges. Exists exactly when one coordinate dominates
/// the whole array's order (as in any lexicographic array).
fn stack_from_slices(array: &RankArray, n: usize) -> Option<Stack> {
    let d = array.dim();
    for dim in 1..=d {
        let steps = array.dims()[dim - 1];
        if steps < n {
            continue;
        }
        let stride = array.stride(dim);
        let mut lo = vec![usize::MAX; steps];
        let mut hi = vec![0usize; steps];
        for off in 0..array.len() {
            let h = (off / stride) % steps;
            let r = array.ranks()[off];
            lo[h] = lo[h].min(r);
            hi[h] = hi[h].max(r);
        }
        if (0..steps - 1).all(|h| hi[h] < lo[h + 1]) {
            let bases = (1..=d)
                .filter(|&j| j != dim)
                .map(|j| (1..=array.dims()[j - 1]).collect())
                .collect();
            return Some(Stack { dim, bases, heights: (1..=steps).collect() });
        }
    }
    None
}

/// The layer at height position `s` as a standalone (d-1)-dimensional
/// increasing array (stack dimension dropped).
fn layer_array(array: &RankArray, stack: &Stack, s: usize) -> RankArray {
    let d = array.dim();
    let mut indices = Vec::with_capacity(d);
    let mut bi = 0;
    for dim in 1..=d {
        if dim == stack.dim {
            indices.push(vec![stack.heights[s]]);
        } else {
            indices.push(stack.bases[bi].clone());
            bi += 1;
        }
    }
    array
        .restrict(&Subgrid { indices })
        .expect("stack layers lie inside the host array")
        .slice_at(stack.dim, 1)
}

/// Last-resort stage shared by the lexicographic extractors: an input that
/// is exactly lexicographic of some type contains its prefix cube.
fn rescue_exact_lex(array: &RankArray, n: usize) -> Option<Extraction<LexType>> {
    detect_lex_type(array).map(|lt| Extraction::found(Subgrid::prefix(array.dim(), n), lt))
}

fn detect_or_fail(array: &RankArray, subgrid: Subgrid) -> Extraction<LexType> {
    match array.restrict(&subgrid).ok().and_then(|r| detect_lex_type(&r)) {
        Some(lt) => Extraction::found(subgrid, lt),
        None => Extraction::failed("lex-core", subgrid.shape()),
    }
}

/// 2-D lexicographic extraction from an increasing array via the
/// anchor-pair coloring: anchors every n-1 steps, each anchor pair colored
/// by which of its two one-step successors is larger, then a row of n-1
/// red anchors or a column of n-1 blue anchors assembles an n x n
/// lexicographic subarray.
pub fn fg_extract_lex_2d(array: &RankArray, n: usize) -> Result<Extraction<LexType>> {
    if array.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: array.dim() });
    }
    if !is_increasing(array) {
        return Err(Error::NotIncreasing);
    }
    Ok(fg_inner(array, n))
}

fn fg_inner(array: &RankArray, n: usize) -> Extraction<LexType> {
    let (d1, d2) = (array.dims()[0], array.dims()[1]);
    if n > d1 || n > d2 {
        return Extraction::failed("impossible-target", vec![d1, d2]);
    }
    if n == 1 {
        return detect_or_fail(array, Subgrid::prefix(2, 1));
    }
    let anchors = |limit: usize| -> Vec<usize> {
        (0..).map(|i| (n - 1) * i + 1).take_while(|&a| a <= limit).collect()
    };
    let a1 = anchors(d1);
    let a2 = anchors(d2);

    // red: the dimension-1 successor anchor is smaller than the
    // dimension-2 successor anchor
    let red = |i: usize, j: usize| -> bool {
        array.rank_at(&[a1[i + 1], a2[j]]) < array.rank_at(&[a1[i], a2[j + 1]])
    };

    if a1.len() >= 2 && a2.len() >= n {
        // row of n-1 reds: dimension-1 interval, dimension-2 anchor set
        for i in 0..a1.len() - 1 {
            let reds: Vec<usize> =
                (0..a2.len() - 1).filter(|&j| red(i, j)).collect();
            if reds.len() >= n - 1 {
                let mut cols: Vec<usize> =
                    reds[..n - 1].iter().map(|&j| a2[j]).collect();
                cols.push(a2[reds[n - 2] + 1]);
                let rows = (a1[i]..=a1[i + 1]).collect();
                return detect_or_fail(array, Subgrid { indices: vec![rows, cols] });
            }
        }
    }
    if a2.len() >= 2 && a1.len() >= n {
        // column of n-1 blues: dimension-1 anchor set, dimension-2 interval
        for j in 0..a2.len() - 1 {
            let blues: Vec<usize> =
                (0..a1.len() - 1).filter(|&i| !red(i, j)).collect();
            if blues.len() >= n - 1 {
                let mut rows: Vec<usize> =
                    blues[..n - 1].iter().map(|&i| a1[i]).collect();
                rows.push(a1[blues[n - 2] + 1]);
                let cols = (a2[j]..=a2[j + 1]).collect();
                return detect_or_fail(array, Subgrid { indices: vec![rows, cols] });
            }
        }
    }
    if let Some(found) = rescue_exact_lex(array, n) {
        return found;
    }
    Extraction::failed("anchor-pigeonhole", vec![a1.len(), a2.len()])
}

/// Orientation of a block line within a layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum LineKind {
    /// Red blocks sharing a block-row (second axis fixed).
    RedRow,
    /// Blue blocks sharing a block-column (first axis fixed).
    BlueCol,
}

/// 3-D lexicographic extraction: stack decomposition, n x n block
/// partition of every layer, red/blue corner coloring of the blocks, a
/// well-populated line per layer, then two pigeonholes (line id across
/// layers, block n-tuples within the line) before assembly.
pub fn extract_lex_3d(array: &RankArray, n: usize) -> Result<Extraction<LexType>> {
    if array.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: array.dim() });
    }
    if !is_increasing(array) {
        return Err(Error::NotIncreasing);
    }
    if array.dims().iter().any(|&s| s < n) {
        return Ok(Extraction::failed("impossible-target", array.dims().to_vec()));
    }
    if n == 1 {
        return Ok(detect_or_fail(array, Subgrid::prefix(3, 1)));
    }

    let mut first_failure: Option<StageFailure> = None;
    let mut consider = |result: Extraction<LexType>| -> Option<Extraction<LexType>> {
        match result {
            found @ Extraction::Found { .. } => Some(found),
            Extraction::Failed(f) => {
                first_failure.get_or_insert(f);
                None
            }
        }
    };

    // blocks need base sides of n*n for n blocks per line
    if let Some((m, t)) = lattice_params(array, n, n * n - 1) {
        if let Ok(stack) = dominant_coordinate(array, m, t) {
            if let Some(found) = consider(base_block_pipeline(array, &stack.into(), n)) {
                return Ok(found);
            }
        }
    }
    if let Some(stack) = stack_from_slices(array, n) {
        if let Some(found) = consider(base_block_pipeline(array, &stack, n)) {
            return Ok(found);
        }
    }
    if let Some(found) = rescue_exact_lex(array, n) {
        return Ok(found);
    }
    Ok(Extraction::Failed(first_failure.unwrap_or(StageFailure {
        stage: "dominant-coordinate",
        achieved: array.dims().to_vec(),
    })))
}

#[allow(clippy::type_complexity)]
fn base_block_pipeline(array: &RankArray, stack: &Stack, n: usize) -> Extraction<LexType> {
    let other: Vec<usize> =
        (1..=array.dim()).filter(|&j| j != stack.dim).collect();
    let (len1, len2) = (stack.bases[0].len(), stack.bases[1].len());
    let (b1, b2) = (len1 / n, len2 / n);
    if b1 == 0 || b2 == 0 {
        return Extraction::failed("block-grid", vec![len1, len2]);
    }

    // value at local layer coordinates (p along other[0], q along other[1])
    let value = |s: usize, p: usize, q: usize| -> usize {
        let mut point = vec![0usize; 3];
        point[stack.dim - 1] = stack.heights[s];
        point[other[0] - 1] = stack.bases[0][p - 1];
        point[other[1] - 1] = stack.bases[1][q - 1];
        array.rank_at(&point)
    };
    // red: top-left corner below bottom-right corner
    let red = |s: usize, bp: usize, bq: usize| -> bool {
        let (lo1, hi1) = ((bp - 1) * n + 1, bp * n);
        let (lo2, hi2) = ((bq - 1) * n + 1, bq * n);
        value(s, lo1, hi2) < value(s, hi1, lo2)
    };

    // per-layer line holding at least half of its blocks in one color
    let mut classes: BTreeMap<(LineKind, usize), Vec<(usize, Vec<usize>)>> = BTreeMap::new();
    for s in 0..stack.heights.len() {
        let mut line: Option<(LineKind, usize, Vec<usize>)> = None;
        for bq in 1..=b2 {
            let reds: Vec<usize> = (1..=b1).filter(|&bp| red(s, bp, bq)).collect();
            if 2 * reds.len() >= b1 {
                line = Some((LineKind::RedRow, bq, reds));
                break;
            }
        }
        if line.is_none() {
            for bp in 1..=b1 {
                let blues: Vec<usize> = (1..=b2).filter(|&bq| !red(s, bp, bq)).collect();
                if 2 * blues.len() >= b2 {
                    line = Some((LineKind::BlueCol, bp, blues));
                    break;
                }
            }
        }
        if let Some((kind, idx, blocks)) = line {
            classes.entry((kind, idx)).or_default().push((s, blocks));
        }
    }
    let Some(((kind, idx), members)) = classes
        .into_iter()
        .max_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| b.0.cmp(&a.0)))
    else {
        return Extraction::failed("block-line", vec![b1, b2]);
    };
    if members.len() < n {
        return Extraction::failed("line-class", vec![members.len()]);
    }

    // shared n-tuple of blocks across n layers of the class
    let b = match kind {
        LineKind::RedRow => b1,
        LineKind::BlueCol => b2,
    };
    if b < n {
        return Extraction::failed("tuple-class", vec![b, members.len()]);
    }
    let mut tuple: Option<(Vec<usize>, Vec<usize>)> = None; // (blocks, layer ids)
    let mut subset: Vec<usize> = (1..=n).collect();
    'tuples: loop {
        let sharers: Vec<usize> = members
            .iter()
            .filter(|(_, blocks)| subset.iter().all(|x| blocks.contains(x)))
            .map(|(s, _)| *s)
            .collect();
        if sharers.len() >= n {
            tuple = Some((subset.clone(), sharers[..n].to_vec()));
            break 'tuples;
        }
        // next n-subset of [b] in lexicographic order
        let mut pos = n;
        while pos > 0 {
            pos -= 1;
            if subset[pos] < b - (n - 1 - pos) {
                subset[pos] += 1;
                for k in pos + 1..n {
                    subset[k] = subset[k - 1] + 1;
                }
                continue 'tuples;
            }
        }
        break 'tuples;
    }
    let Some((blocks, layers)) = tuple else {
        return Extraction::failed("tuple-class", vec![members.len()]);
    };

    // assembly: one boundary index per chosen block along the line,
    // the full n-range of the fixed block across it, chosen heights
    let (list1, list2) = match kind {
        LineKind::RedRow => {
            let axis1: Vec<usize> =
                blocks.iter().map(|&bp| stack.bases[0][bp * n - 1]).collect();
            let axis2: Vec<usize> =
                ((idx - 1) * n..idx * n).map(|k| stack.bases[1][k]).collect();
            (axis1, axis2)
        }
        LineKind::BlueCol => {
            let axis1: Vec<usize> =
                ((idx - 1) * n..idx * n).map(|k| stack.bases[0][k]).collect();
            let axis2: Vec<usize> =
                blocks.iter().map(|&bq| stack.bases[1][bq * n - 1]).collect();
            (axis1, axis2)
        }
    };
    let mut indices = vec![Vec::new(); 3];
    indices[stack.dim - 1] = layers.iter().map(|&s| stack.heights[s]).collect();
    indices[other[0] - 1] = list1;
    indices[other[1] - 1] = list2;
    detect_or_fail(array, Subgrid { indices })
}

/// General lexicographic extraction from an increasing array.
///
/// Two dimensions use the anchor argument directly; above that, each
/// stack layer is solved recursively and the layers are pigeonholed on
/// (type, position) agreement.
pub fn extract_lex_d(array: &RankArray, n: usize) -> Result<Extraction<LexType>> {
    if array.dim() < 2 {
        return Err(Error::BadParameter("lexicographic extraction needs d >= 2".into()));
    }
    if !is_increasing(array) {
        return Err(Error::NotIncreasing);
    }
    Ok(rec_lex(array, n))
}

fn rec_lex(array: &RankArray, n: usize) -> Extraction<LexType> {
    let d = array.dim();
    if d == 2 {
        return fg_inner(array, n);
    }
    if array.dims().iter().any(|&s| s < n) {
        return Extraction::failed("impossible-target", array.dims().to_vec());
    }
    if n == 1 {
        return detect_or_fail(array, Subgrid::prefix(d, 1));
    }

    let mut first_failure: Option<StageFailure> = None;
    let mut consider = |result: Extraction<LexType>| -> Option<Extraction<LexType>> {
        match result {
            found @ Extraction::Found { .. } => Some(found),
            Extraction::Failed(f) => {
                first_failure.get_or_insert(f);
                None
            }
        }
    };

    if let Some((m, t)) = lattice_params(array, n, n) {
        if let Ok(stack) = dominant_coordinate(array, m, t) {
            if let Some(found) = consider(induction_pipeline(array, &stack.into(), n)) {
                return found;
            }
        }
    }
    if let Some(stack) = stack_from_slices(array, n) {
        if let Some(found) = consider(induction_pipeline(array, &stack, n)) {
            return found;
        }
    }
    if let Some(found) = rescue_exact_lex(array, n) {
        return found;
    }
    Extraction::Failed(first_failure.unwrap_or(StageFailure {
        stage: "dominant-coordinate",
        achieved: array.dims().to_vec(),
    }))
}

#[allow(clippy::type_complexity)]
fn induction_pipeline(array: &RankArray, stack: &Stack, n: usize) -> Extraction<LexType> {
    // solve every layer in d-1 dimensions, then demand n layers agreeing
    // on both the type and the exact subgrid position
    let mut classes: BTreeMap<(Vec<usize>, Vec<Vec<usize>>), Vec<usize>> = BTreeMap::new();
    for s in 0..stack.heights.len() {
        let layer = layer_array(array, stack, s);
        if let Extraction::Found { subgrid, kind } = rec_lex(&layer, n) {
            classes.entry((kind.sigma, subgrid.indices)).or_default().push(s);
        }
    }
    if classes.is_empty() {
        return Extraction::failed("layer-recursion", vec![stack.heights.len()]);
    }
    let ((_, local), layers) = classes
        .into_iter()
        .max_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| b.0.cmp(&a.0)))
        .unwrap();
    if layers.len() < n {
        return Extraction::failed("sigma-class", vec![layers.len()]);
    }

    let d = array.dim();
    let mut indices = vec![Vec::new(); d];
    indices[stack.dim - 1] = layers[..n].iter().map(|&s| stack.heights[s]).collect();
    let mut bi = 0;
    for dim in 1..=d {
        if dim == stack.dim {
            continue;
        }
        indices[dim - 1] = local[bi].iter().map(|&i| stack.bases[bi][i - 1]).collect();
        bi += 1;
    }
    detect_or_fail(array, Subgrid { indices })
}

/// Full pipeline for arbitrary arrays: extract the largest certifiable
/// monotone subarray, reflect it to an increasing one, extract a
/// lexicographic subarray there, and pull the indices back to the source.
/// The returned type is detected on the source restriction, so its signs
/// report the monotone pattern composed with the inner type.
pub fn pipeline_lex_monotone(array: &RankArray, n: usize) -> Extraction<LexType> {
    assert!(n >= 1);
    let d = array.dim();
    if array.dims().iter().any(|&s| s < n) {
        return Extraction::failed("impossible-target", array.dims().to_vec());
    }
    if n == 1 {
        return detect_or_fail(array, Subgrid::prefix(d, 1));
    }
    if d == 1 {
        let sub = es_monotone_subsequence(array.ranks(), None);
        if sub.indices.len() < n {
            return Extraction::failed("monotone-core", vec![sub.indices.len()]);
        }
        let sign = match sub.direction {
            Direction::Increasing => Sign::Pos,
            Direction::Decreasing => Sign::Neg,
        };
        return Extraction::found(
            Subgrid { indices: vec![sub.indices[..n].to_vec()] },
            LexType { sigma: vec![1], signs: vec![sign] },
        );
    }

    // monotone stage, deepened to the largest certifiable cube
    let mut best = None;
    for target in n..=array.min_dim() {
        let result = match d {
            2 => extract_monotone_2d(array, target, target),
            3 => extract_monotone_3d(array, target),
            _ => extract_monotone_d(array, target),
        };
        match result {
            Extraction::Found { subgrid, kind } => best = Some((subgrid, kind)),
            Extraction::Failed(f) if best.is_none() => return Extraction::Failed(f),
            Extraction::Failed(_) => break,
        }
    }
    let (mono_sub, pattern) = best.expect("loop either returned or set a result");
    let mono_array = array.restrict(&mono_sub).expect("extraction result is valid");
    let (increasing, reflection) = normalize_to_increasing(&mono_array, &pattern)
        .expect("extractor certified this pattern");

    let inner = if d == 2 { fg_inner(&increasing, n) } else { rec_lex(&increasing, n) };
    match inner {
        Extraction::Found { subgrid, .. } => {
            let global = mono_sub.compose(&reflection.pull_back(&subgrid));
            detect_or_fail(array, global)
        }
        Extraction::Failed(f) => Extraction::Failed(f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gen_lex, gen_random_increasing};
    use crate::grid::lex_type_check;

    fn lt(sigma: &[usize], signs: &[i8]) -> LexType {
        LexType::new(
            sigma.to_vec(),
            signs.iter().map(|&s| Sign::from_i8(s).unwrap()).collect(),
        )
        .unwrap()
    }

    fn assert_lex_found(array: &RankArray, result: &Extraction<LexType>, n: usize) -> LexType {
        match result {
            Extraction::Found { subgrid, kind } => {
                assert!(subgrid.shape().iter().all(|&s| s == n));
                let r = array.restrict(subgrid).unwrap();
                assert!(lex_type_check(&r, kind).unwrap(), "type mismatch: {kind}");
                kind.clone()
            }
            Extraction::Failed(f) => panic!("expected success, failed at {}", f.stage),
        }
    }

    #[test]
    fn fg_trivial_two_by_two() {
        for seed in 0..20 {
            let a = gen_random_increasing(&[2, 2], seed).unwrap();
            let r = fg_extract_lex_2d(&a, 2).unwrap();
            assert_lex_found(&a, &r, 2);
        }
    }

    #[test]
    fn fg_threshold_guarantee() {
        // side 2n^2 - 5n + 4 forces an n x n lexicographic subarray
        for n in [3usize, 4] {
            let side = 2 * n * n - 5 * n + 4;
            for seed in 0..50 {
                let a = gen_random_increasing(&[side, side], seed).unwrap();
                let r = fg_extract_lex_2d(&a, n).unwrap();
                let found = assert_lex_found(&a, &r, n);
                assert!(found.signs.iter().all(|&s| s == Sign::Pos));
                // one dimension of the witness is a full anchor interval:
                // n consecutive indices
                let sub = r.subgrid().unwrap();
                let consecutive = |list: &[usize]| {
                    list.windows(2).all(|w| w[1] == w[0] + 1)
                };
                assert!(
                    consecutive(&sub.indices[0]) || consecutive(&sub.indices[1]),
                    "anchor interval missing from {:?}",
                    sub.indices
                );
            }
        }
    }

    #[test]
    fn fg_finds_smaller_squares_inside_the_extremal_array() {
        // the n = 4 lower-bound array is 16 x 16, above the n = 3
        // threshold of 7, so a 3 x 3 must exist and the anchor coloring
        // here is genuinely mixed
        let a = crate::constructions::gen_f2_lower(4).unwrap();
        let r = fg_extract_lex_2d(&a, 3).unwrap();
        let found = assert_lex_found(&a, &r, 3);
        assert!(found.signs.iter().all(|&s| s == Sign::Pos));

        let piped = pipeline_lex_monotone(&a, 3);
        assert!(piped.is_found(), "pipeline reduces to the same extraction");
    }

    #[test]
    fn dominant_coordinate_on_structured_input() {
        // block-structured but far from a sorted grid
        let a = crate::constructions::gen_f2_lower(8).unwrap();
        assert_eq!(a.dims(), &[91, 91]);
        let stack = dominant_coordinate(&a, 5, 4).unwrap();
        assert_eq!(stack.bases[0].len(), 6);
        assert_eq!(stack.heights.len(), 4);
        for s in 0..stack.heights.len() - 1 {
            let (_, max_lo) = layer_extremes(&a, &stack, s).unwrap();
            let (min_hi, _) = layer_extremes(&a, &stack, s + 1).unwrap();
            assert!(max_lo < min_hi);
        }
    }

    #[test]
    fn fg_rejects_non_increasing() {
        let a = RankArray::new(vec![2, 2], vec![1, 0, 2, 3]).unwrap();
        assert!(matches!(fg_extract_lex_2d(&a, 2), Err(Error::NotIncreasing)));
    }

    #[test]
    fn fg_fails_on_certified_free_array() {
        let a = crate::constructions::gen_f2_lower(3).unwrap();
        let r = fg_extract_lex_2d(&a, 3).unwrap();
        assert!(matches!(r, Extraction::Failed(_)), "6x6 lower-bound array has no 3x3");
    }

    #[test]
    fn dominant_coordinate_worked_example() {
        // 16 x 16 sorted with dimension 2 most significant
        let a = gen_lex(&[16, 16], &lt(&[2, 1], &[1, 1])).unwrap();
        let stack = dominant_coordinate(&a, 2, 2).unwrap();
        assert_eq!(stack.dim, 2);
        assert_eq!(stack.bases, vec![vec![2, 3, 4]]);
        assert_eq!(stack.heights, vec![2, 6]);

        // mirrored: dimension 1 most significant
        let b = gen_lex(&[16, 16], &lt(&[1, 2], &[1, 1])).unwrap();
        let stack = dominant_coordinate(&b, 2, 2).unwrap();
        assert_eq!(stack.dim, 1);
    }

    #[test]
    fn dominant_coordinate_three_dims() {
        let a = RankArray::new(vec![36, 36, 36], (0..36 * 36 * 36).collect()).unwrap();
        let stack = dominant_coordinate(&a, 2, 2).unwrap();
        assert_eq!(stack.dim, 3);
        assert_eq!(stack.bases.len(), 2);
        assert!(stack.bases.iter().all(|b| b.len() == 3));
        // separation verified internally; double-check the public invariant
        for s in 0..stack.heights.len() - 1 {
            let (_, max_lo) = layer_extremes(&a, &stack, s).unwrap();
            let (min_hi, _) = layer_extremes(&a, &stack, s + 1).unwrap();
            assert!(max_lo < min_hi);
        }
    }

    #[test]
    fn dominant_coordinate_rejects_bad_inputs() {
        let small = gen_random_increasing(&[8, 8], 1).unwrap();
        assert!(matches!(dominant_coordinate(&small, 2, 2), Err(Error::TooSmall(_))));
        let skewed = RankArray::new(vec![16, 16], (0..256).rev().collect::<Vec<_>>());
        // reversed ranks are decreasing, not increasing
        let skewed = skewed.unwrap();
        assert!(matches!(dominant_coordinate(&skewed, 2, 2), Err(Error::NotIncreasing)));
        let ok = gen_lex(&[16, 16], &lt(&[1, 2], &[1, 1])).unwrap();
        assert!(matches!(dominant_coordinate(&ok, 1, 2), Err(Error::BadParameter(_))));
    }

    #[test]
    fn lex_3d_on_lex_cube() {
        let a = gen_lex(&[8, 8, 8], &lt(&[3, 1, 2], &[1, 1, 1])).unwrap();
        let r = extract_lex_3d(&a, 2).unwrap();
        let found = assert_lex_found(&a, &r, 2);
        assert_eq!(found.sigma, vec![3, 1, 2]);
        // the block pipeline picks strip boundaries, not a bare prefix,
        // so this witness pins the full layered path
        assert_eq!(
            r.subgrid().unwrap().indices,
            vec![vec![2, 4], vec![1, 2], vec![1, 2]]
        );
    }

    #[test]
    fn lex_3d_whole_cube_at_exact_size() {
        // block grid collapses to a single block per side; the exact-lex
        // fallback must still return the full cube
        let cand = lt(&[2, 3, 1], &[1, 1, 1]);
        let a = gen_lex(&[3, 3, 3], &cand).unwrap();
        let r = extract_lex_3d(&a, 3).unwrap();
        match r {
            Extraction::Found { subgrid, kind } => {
                assert_eq!(subgrid, Subgrid::full(&[3, 3, 3]));
                assert_eq!(kind, cand);
            }
            Extraction::Failed(f) => panic!("failed at {}", f.stage),
        }
    }

    #[test]
    fn lex_3d_small_dims_fail_fast() {
        let a = gen_random_increasing(&[2, 2, 2], 3).unwrap();
        match extract_lex_3d(&a, 3).unwrap() {
            Extraction::Failed(f) => assert_eq!(f.stage, "impossible-target"),
            Extraction::Found { .. } => panic!("3-cube cannot fit in a 2-cube"),
        }
    }

    #[test]
    fn lex_3d_best_effort_validates() {
        let mut found = 0;
        for seed in 0..20 {
            let a = gen_random_increasing(&[12, 12, 12], seed).unwrap();
            match extract_lex_3d(&a, 2).unwrap() {
                Extraction::Found { subgrid, kind } => {
                    let r = a.restrict(&subgrid).unwrap();
                    assert!(lex_type_check(&r, &kind).unwrap());
                    found += 1;
                }
                Extraction::Failed(_) => {}
            }
        }
        let _ = found; // staged failures acceptable below guarantee sizes
    }

    #[test]
    fn lex_d_on_four_dims() {
        let a = gen_lex(&[6, 6, 6, 6], &lt(&[4, 1, 2, 3], &[1, 1, 1, 1])).unwrap();
        let r = extract_lex_d(&a, 2).unwrap();
        let found = assert_lex_found(&a, &r, 2);
        assert_eq!(found.sigma[0], 4);
    }

    #[test]
    fn lex_d_cross_checks_with_3d() {
        for seed in 0..10 {
            let a = gen_random_increasing(&[10, 10, 10], seed).unwrap();
            let via_d = extract_lex_d(&a, 2).unwrap();
            let via_3d = extract_lex_3d(&a, 2).unwrap();
            for r in [&via_d, &via_3d] {
                if let Extraction::Found { subgrid, kind } = r {
                    let restr = a.restrict(subgrid).unwrap();
                    assert!(lex_type_check(&restr, kind).unwrap());
                }
            }
        }
    }

    #[test]
    fn lex_d_below_size_names_the_stack_stage() {
        let a = gen_random_increasing(&[3, 3, 3], 77).unwrap();
        match extract_lex_d(&a, 3).unwrap() {
            Extraction::Failed(f) => assert_eq!(f.stage, "dominant-coordinate"),
            Extraction::Found { subgrid, kind } => {
                // a lucky random draw may genuinely contain one; verify it
                let r = a.restrict(&subgrid).unwrap();
                assert!(lex_type_check(&r, &kind).unwrap());
            }
        }
    }

    #[test]
    fn pipeline_round_trips_signed_types() {
        for cand in LexType::enumerate_all(2) {
            let a = gen_lex(&[5, 4], &cand).unwrap();
            match pipeline_lex_monotone(&a, 2) {
                Extraction::Found { subgrid, kind } => {
                    assert_eq!(kind, cand, "detected type should round trip");
                    let r = a.restrict(&subgrid).unwrap();
                    assert!(lex_type_check(&r, &kind).unwrap());
                }
                Extraction::Failed(f) => panic!("{cand} failed at {}", f.stage),
            }
        }
    }

    #[test]
    fn pipeline_three_dim_round_trip() {
        let cand = lt(&[2, 3, 1], &[-1, 1, -1]);
        let a = gen_lex(&[4, 3, 5], &cand).unwrap();
        match pipeline_lex_monotone(&a, 2) {
            Extraction::Found { kind, .. } => assert_eq!(kind, cand),
            Extraction::Failed(f) => panic!("failed at {}", f.stage),
        }
    }

    #[test]
    fn pipeline_on_increasing_input_matches_direct_extraction() {
        for seed in 0..30 {
            let a = gen_random_increasing(&[7, 7], seed).unwrap();
            let direct = fg_extract_lex_2d(&a, 3).unwrap();
            let piped = pipeline_lex_monotone(&a, 3);
            match (&direct, &piped) {
                (Extraction::Found { .. }, Extraction::Found { subgrid, kind }) => {
                    let r = a.restrict(subgrid).unwrap();
                    assert!(lex_type_check(&r, kind).unwrap());
                }
                (Extraction::Failed(_), Extraction::Failed(_)) => {}
                _ => {
                    // deepening may pick a different monotone core, so
                    // found/failed can differ; both must stay sound, which
                    // the arms above already checked
                }
            }
        }
    }

    #[test]
    fn pipeline_best_effort_on_random_squares() {
        let mut found = 0;
        for seed in 0..50 {
            let a = crate::constructions::gen_random(&[10, 10], seed).unwrap();
            match pipeline_lex_monotone(&a, 2) {
                Extraction::Found { subgrid, kind } => {
                    let r = a.restrict(&subgrid).unwrap();
                    assert!(lex_type_check(&r, &kind).unwrap());
                    found += 1;
                }
                Extraction::Failed(f) => assert!(!f.stage.is_empty()),
            }
        }
        assert!(found > 0, "some random 10x10 arrays should come through");
    }

    #[test]
    fn pipeline_one_dimensional() {
        let a = RankArray::new(vec![5], vec![1, 0, 3, 2, 4]).unwrap();
        match pipeline_lex_monotone(&a, 3) {
            Extraction::Found { subgrid, kind } => {
                assert_eq!(subgrid.indices, vec![vec![1, 3, 5]]);
                assert_eq!(kind.signs, vec![Sign::Pos]);
            }
            Extraction::Failed(f) => panic!("failed at {}", f.stage),
        }
    }
}
