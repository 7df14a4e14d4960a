//! Independent brute-force ground truth: exhaustive subgrid searches,
//! largest-square computation, and construction certificates.
//!
//! Two engines back the searches. The naive engine enumerates every
//! candidate index-set tuple in lexicographic order and is the reference
//! for everything else (its candidate counter matches the closed-form
//! count when a search exhausts). The pruned engine walks prefixes of the
//! primary dimension with incremental compatibility masks and a chain
//! bound; it returns the same witnesses as the naive engine and is what
//! makes the larger certificates finish in minutes.
//!
//! An exhausted search returning `None` is a proof of absence. Running
//! out of budget is an explicit error, never a silent `None`.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::grid::{LexType, MonotonicityPattern, RankArray, Sign, Subgrid, is_increasing};

/// Limits for a brute-force search.
#[derive(Debug, Clone)]
pub struct SearchBudget {
    /// Candidates (naive) or search nodes (pruned) allowed.
    pub max_candidates: u64,
    /// Optional wall-clock limit, checked coarsely.
    pub max_time: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_candidates: u64::MAX, max_time: None }
    }
}

impl SearchBudget {
    pub fn candidates(max_candidates: u64) -> Self {
        SearchBudget { max_candidates, max_time: None }
    }
}

/// Which search engine to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Pruned,
    Naive,
}

/// Options shared by the oracle entry points.
#[derive(Debug, Clone, Default)]
pub struct SearchOpts {
    pub budget: SearchBudget,
    pub engine: Engine,
    /// Worker threads for the naive engine's candidate sweep; the result
    /// is identical to a sequential run.
    pub threads: usize,
}

struct Counter {
    visited: u64,
    cap: u64,
    deadline: Option<Instant>,
}

impl Counter {
    fn new(budget: &SearchBudget) -> Self {
        Counter {
            visited: 0,
            cap: budget.max_candidates,
            deadline: budget.max_time.map(|d| Instant::now() + d),
        }
    }

    fn tick(&mut self) -> Result<()> {
        if self.visited >= self.cap {
            return Err(Error::BudgetExceeded { visited: self.visited });
        }
        self.visited += 1;
        if self.visited & 0xFFF == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() > deadline {
                    return Err(Error::BudgetExceeded { visited: self.visited });
                }
            }
        }
        Ok(())
    }
}

fn binomial(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut out: u128 = 1;
    for i in 0..k {
        out = out.saturating_mul((m - i) as u128) / (i as u128 + 1);
    }
    out
}

/// Lexicographically next k-subset of `1..=m`, in place.
fn next_subset(sub: &mut [usize], m: usize) -> bool {
    let k = sub.len();
    for i in (0..k).rev() {
        if sub[i] < m - (k - 1 - i) {
            sub[i] += 1;
            for j in i + 1..k {
                sub[j] = sub[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The k-subset of `1..=m` at lexicographic `rank`.
fn unrank_subset(m: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut x = 1;
    let mut slots = k;
    while slots > 0 {
        let with_x = binomial(m - x, slots - 1);
        if rank < with_x {
            out.push(x);
            slots -= 1;
        } else {
            rank -= with_x;
        }
        x += 1;
    }
    out
}

fn reflect_point(point: &mut [usize], dims: &[usize], signs: &[Sign]) {
    for ((x, &n), &s) in point.iter_mut().zip(dims).zip(signs) {
        if s == Sign::Neg {
            *x = n + 1 - *x;
        }
    }
}

/// Array with every `Neg` dimension reversed.
#[allow(clippy::needless_range_loop)]
fn reflect_array(array: &RankArray, signs: &[Sign]) -> RankArray {
    let mut ranks = vec![0usize; array.len()];
    for off in 0..array.len() {
        let mut p = array.point_of(off);
        reflect_point(&mut p, array.dims(), signs);
        ranks[off] = array.rank_at(&p);
    }
    RankArray::new(array.dims().to_vec(), ranks).expect("reflection permutes ranks")
}

fn reflect_subgrid_back(sub: Subgrid, dims: &[usize], signs: &[Sign]) -> Subgrid {
    let indices = sub
        .indices
        .into_iter()
        .zip(dims.iter().zip(signs))
        .map(|(list, (&n, &s))| match s {
            Sign::Pos => list,
            Sign::Neg => {
                let mut mapped: Vec<usize> = list.iter().map(|&i| n + 1 - i).collect();
                mapped.reverse();
                mapped
            }
        })
        .collect();
    Subgrid { indices }
}

fn transpose(array: &RankArray) -> RankArray {
    let (r, c) = (array.dims()[0], array.dims()[1]);
    let mut ranks = vec![0usize; array.len()];
    for y in 1..=c {
        for x in 1..=r {
            ranks[(y - 1) + (x - 1) * c] = array.rank_at(&[x, y]);
        }
    }
    RankArray::new(vec![c, r], ranks).expect("transpose permutes ranks")
}

// ---------------------------------------------------------------------------
// core search: a x b subgrid ordered dimension-2-first (type (2,1), all
// signs +1) in a 2-D array; rows = dimension 1, columns = dimension 2.
// Other types reduce to this by reflection and transposition.
// ---------------------------------------------------------------------------

/// Direct check that (rows, cols) selects a dimension-2-first block order:
/// each column ascends over the rows and consecutive columns have
/// separated value ranges.
fn verify_type21(array: &RankArray, rows: &[usize], cols: &[usize]) -> bool {
    for &c in cols {
        for w in rows.windows(2) {
            if array.rank_at(&[w[0], c]) >= array.rank_at(&[w[1], c]) {
                return false;
            }
        }
    }
    for w in cols.windows(2) {
        let hi_low = array.rank_at(&[*rows.last().unwrap(), w[0]]);
        let lo_high = array.rank_at(&[rows[0], w[1]]);
        if hi_low >= lo_high {
            return false;
        }
    }
    true
}

/// Naive engine: column subsets outer, row subsets inner, both in
/// lexicographic order. Candidate index = col_rank * C(rows, a) + row_rank.
#[allow(clippy::type_complexity)]
fn naive_type21(
    array: &RankArray,
    a: usize,
    b: usize,
    counter: &mut Counter,
    threads: usize,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let (n_rows, n_cols) = (array.dims()[0], array.dims()[1]);
    let col_space = binomial(n_cols, b);
    let row_space = binomial(n_rows, a);
    let total = col_space.saturating_mul(row_space);
    if total == 0 {
        return Ok(None);
    }
    let threads = threads.max(1).min(col_space.min(64) as usize).max(1);
    if threads == 1 {
        let mut cols: Vec<usize> = (1..=b).collect();
        loop {
            let mut rows: Vec<usize> = (1..=a).collect();
            loop {
                counter.tick()?;
                if verify_type21(array, &rows, &cols) {
                    return Ok(Some((rows, cols)));
                }
                if !next_subset(&mut rows, n_rows) {
                    break;
                }
            }
            if !next_subset(&mut cols, n_cols) {
                break;
            }
        }
        return Ok(None);
    }

    // striped parallel sweep with sequential semantics: the winning witness
    // is the one with the smallest global candidate index, and the budget
    // cuts the enumeration at the same global index as a sequential run
    let cap = counter.cap.saturating_sub(counter.visited) as u128;
    let deadline = counter.deadline;
    let stripe = col_space.div_ceil(threads as u128);
    let results: Vec<Result<(Option<(u128, Vec<usize>, Vec<usize>)>, u128)>> =
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for t in 0..threads {
                let lo = stripe * t as u128;
                let hi = col_space.min(lo + stripe);
                handles.push(scope.spawn(move || {
                    let mut scanned: u128 = 0;
                    if lo >= hi || lo.saturating_mul(row_space) >= cap {
                        return Ok((None, scanned));
                    }
                    let mut cols = unrank_subset(n_cols, b, lo);
                    for col_rank in lo..hi {
                        let base = col_rank * row_space;
                        if base >= cap {
                            break;
                        }
                        let mut rows: Vec<usize> = (1..=a).collect();
                        let mut row_rank: u128 = 0;
                        loop {
                            if base + row_rank >= cap {
                                break;
                            }
                            scanned += 1;
                            if scanned & 0xFFF == 0 {
                                if let Some(dl) = deadline {
                                    if Instant::now() > dl {
                                        return Err(Error::BudgetExceeded {
                                            visited: scanned as u64,
                                        });
                                    }
                                }
                            }
                            if verify_type21(array, &rows, &cols) {
                                return Ok((
                                    Some((base + row_rank, rows, cols)),
                                    scanned,
                                ));
                            }
                            if !next_subset(&mut rows, n_rows) {
                                break;
                            }
                            row_rank += 1;
                        }
                        if col_rank + 1 < hi && !next_subset(&mut cols, n_cols) {
                            break;
                        }
                    }
                    Ok((None, scanned))
                }));
            }
            handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect()
        });

    let mut best: Option<(u128, Vec<usize>, Vec<usize>)> = None;
    let mut scanned_total: u128 = 0;
    for r in results {
        let (hit, scanned) = r?;
        scanned_total += scanned;
        if let Some((idx, rows, cols)) = hit {
            if best.as_ref().is_none_or(|(b_idx, _, _)| idx < *b_idx) {
                best = Some((idx, rows, cols));
            }
        }
    }
    match best {
        Some((idx, rows, cols)) if idx < cap => {
            counter.visited = counter.visited.saturating_add(idx as u64 + 1);
            Ok(Some((rows, cols)))
        }
        _ if total > cap => Err(Error::BudgetExceeded { visited: counter.cap }),
        _ => {
            counter.visited = counter.visited.saturating_add(scanned_total as u64);
            Ok(None)
        }
    }
}

/// Exact existence decision on an increasing array.
///
/// A dimension-2-first block witness is pinned down by its extreme rows
/// (r1, ra): any rows between them can fill the chain, and the column
/// constraints collapse to disjoint ascending value intervals
/// [f(r1, c), f(ra, c)]. On an increasing array both interval endpoints
/// grow with the column index, so the longest admissible column chain for
/// a fixed row pair is a single greedy sweep.
fn exists_type21_increasing(
    array: &RankArray,
    a: usize,
    b: usize,
    counter: &mut Counter,
) -> Result<bool> {
    let (n_rows, n_cols) = (array.dims()[0], array.dims()[1]);
    let col = |c: usize| -> &[usize] { &array.ranks()[(c - 1) * n_rows..c * n_rows] };
    for r1 in 1..=n_rows - (a - 1) {
        for ra in r1 + (a - 1)..=n_rows {
            counter.tick()?;
            let mut len = 0usize;
            let mut last_top = 0usize;
            for c in 1..=n_cols {
                let v = col(c);
                if len == 0 || v[r1 - 1] > last_top {
                    len += 1;
                    last_top = v[ra - 1];
                    if len >= b {
                        return Ok(true);
                    }
                }
            }
        }
    }
    Ok(false)
}

/// Pruned engine: depth-first over column prefixes in lexicographic order.
///
/// Per prefix it maintains two bit relations over row pairs: `pair[r]`
/// (rows r' > r with every chosen column ascending from r to r') and
/// `anchor[rf]` (rows rl where every consecutive chosen column pair
/// separates f(rl, c_i) < f(rf, c_{i+1})). A prefix only survives while
/// some row pair with enough room between its endpoints satisfies both,
/// which is exactly what a completed witness needs at its extremes; every
/// 2 x 2 submatrix of a validly ordered block already enforces these
/// constraints, so the pruning never discards a true witness.
///
/// Increasing arrays are gated through [`exists_type21_increasing`]
/// first, so exhaustive absence (the certificate case) never pays for the
/// tree walk.
#[allow(clippy::needless_range_loop)]
fn pruned_type21(
    array: &RankArray,
    a: usize,
    b: usize,
    counter: &mut Counter,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let (n_rows, n_cols) = (array.dims()[0], array.dims()[1]);
    if a > n_rows || b > n_cols {
        return Ok(None);
    }
    if is_increasing(array) && !exists_type21_increasing(array, a, b, counter)? {
        return Ok(None);
    }
    let words = n_rows.div_ceil(64);
    let col = |c: usize| -> &[usize] { &array.ranks()[(c - 1) * n_rows..c * n_rows] };

    // asc[c][r] = bitmask of rows r' with f(r', c) > f(r, c)
    let mut asc: Vec<Vec<u64>> = Vec::with_capacity(n_cols);
    for c in 1..=n_cols {
        let v = col(c);
        let mut mask = vec![0u64; n_rows * words];
        for r in 0..n_rows {
            for rp in 0..n_rows {
                if v[rp] > v[r] {
                    mask[r * words + rp / 64] |= 1 << (rp % 64);
                }
            }
        }
        asc.push(mask);
    }
    // rooms[rf] = rows rl with rl - rf >= a - 1
    let mut rooms = vec![0u64; n_rows * words];
    for rf in 0..n_rows {
        for rl in rf + (a - 1)..n_rows {
            rooms[rf * words + rl / 64] |= 1 << (rl % 64);
        }
    }

    // all rows set, padding bits past n_rows kept clear
    let full_row: Vec<u64> = (0..words)
        .map(|w| {
            let bits = n_rows.saturating_sub(w * 64).min(64);
            if bits == 64 { !0u64 } else { (1u64 << bits) - 1 }
        })
        .collect();
    let init: Vec<u64> =
        std::iter::repeat_n(full_row, n_rows).flatten().collect();
    let mut pair = vec![init.clone(); b + 1];
    let mut anchor = vec![init; b + 1];
    let mut chosen: Vec<usize> = Vec::with_capacity(b);

    fn feasible(
        pair: &[u64],
        anchor: &[u64],
        rooms: &[u64],
        n_rows: usize,
        words: usize,
        a: usize,
    ) -> bool {
        for rf in 0..n_rows {
            let base = rf * words;
            for w in 0..words {
                let combined = if a == 1 {
                    anchor[base + w] & rooms[base + w]
                } else {
                    pair[base + w] & anchor[base + w] & rooms[base + w]
                };
                if combined != 0 {
                    return true;
                }
            }
        }
        false
    }

    // lexicographically smallest row chain for the completed column set
    fn accept(
        pair: &[u64],
        anchor: &[u64],
        rooms: &[u64],
        n_rows: usize,
        words: usize,
        a: usize,
    ) -> Option<Vec<usize>> {
        let bit = |mask: &[u64], r: usize, rp: usize| -> bool {
            mask[r * words + rp / 64] >> (rp % 64) & 1 == 1
        };
        if a == 1 {
            return (0..n_rows)
                .find(|&r| bit(anchor, r, r))
                .map(|r| vec![r + 1]);
        }
        for r1 in 0..n_rows {
            // rows reachable from r1 by an ascending chain, with max length
            let mut len = vec![0usize; n_rows];
            len[r1] = 1;
            for x in r1 + 1..n_rows {
                let mut best = 0;
                for y in r1..x {
                    if len[y] > best && bit(pair, y, x) {
                        best = len[y];
                    }
                }
                if best > 0 {
                    len[x] = best + 1;
                }
            }
            let in_f = |x: usize| -> bool {
                bit(anchor, r1, x) && bit(rooms, r1, x) && bit(pair, r1, x) && len[x] >= a
            };
            if !(r1 + a - 1..n_rows).any(in_f) {
                continue;
            }
            // farthest chain length from x down to some endpoint in F
            let mut reach = vec![0usize; n_rows];
            for x in (r1 + 1..n_rows).rev() {
                if len[x] == 0 {
                    continue;
                }
                let mut best = 0;
                for y in x + 1..n_rows {
                    if reach[y] > 0 && bit(pair, x, y) && reach[y] > best {
                        best = reach[y];
                    }
                }
                reach[x] = if in_f(x) { (best + 1).max(1) } else if best > 0 { best + 1 } else { 0 };
            }
            let mut picked = vec![r1 + 1];
            let mut cur = r1;
            let mut needed = a - 1;
            while needed > 0 {
                let mut advanced = false;
                for x in cur + 1..n_rows {
                    if !bit(pair, cur, x) {
                        continue;
                    }
                    let ok = if needed == 1 { in_f(x) } else { reach[x] >= needed };
                    if ok {
                        picked.push(x + 1);
                        cur = x;
                        needed -= 1;
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    break;
                }
            }
            if picked.len() == a {
                return Some(picked);
            }
        }
        None
    }

    // iterative DFS over column prefixes
    let mut stack: Vec<usize> = vec![1]; // next column candidate at each depth
    while let Some(&cand) = stack.last() {
        let depth = stack.len() - 1; // columns already chosen
        if cand > n_cols - (b - depth - 1) {
            stack.pop();
            chosen.pop();
            if let Some(last) = stack.last_mut() {
                *last += 1;
            }
            continue;
        }
        counter.tick()?;
        // push column `cand` on top of `depth` chosen columns
        {
            let (lower, upper) = pair.split_at_mut(depth + 1);
            let src = &lower[depth];
            let dst = &mut upper[0];
            let mask = &asc[cand - 1];
            for i in 0..n_rows * words {
                dst[i] = src[i] & mask[i];
            }
        }
        {
            let (lower, upper) = anchor.split_at_mut(depth + 1);
            let src = &lower[depth];
            let dst = &mut upper[0];
            if let Some(&prev) = chosen.last() {
                let (vp, vc) = (col(prev), col(cand));
                for rf in 0..n_rows {
                    for w in 0..words {
                        let mut bits = src[rf * words + w];
                        let mut keep = 0u64;
                        while bits != 0 {
                            let rl = w * 64 + bits.trailing_zeros() as usize;
                            bits &= bits - 1;
                            if vp[rl] < vc[rf] {
                                keep |= 1 << (rl % 64);
                            }
                        }
                        dst[rf * words + w] = keep;
                    }
                }
            } else {
                dst.copy_from_slice(src);
            }
        }
        let new_depth = depth + 1;
        if !feasible(&pair[new_depth], &anchor[new_depth], &rooms, n_rows, words, a) {
            *stack.last_mut().unwrap() += 1;
            continue;
        }
        if new_depth == b {
            if let Some(rows) =
                accept(&pair[new_depth], &anchor[new_depth], &rooms, n_rows, words, a)
            {
                let mut cols = chosen.clone();
                cols.push(cand);
                return Ok(Some((rows, cols)));
            }
            *stack.last_mut().unwrap() += 1;
            continue;
        }
        chosen.push(cand);
        stack.push(cand + 1);
    }
    Ok(None)
}

fn search_one_type(
    array: &RankArray,
    shape: (usize, usize),
    lt: &LexType,
    counter: &mut Counter,
    engine: Engine,
    threads: usize,
) -> Result<Option<Subgrid>> {
    let reflected = if lt.signs.contains(&Sign::Neg) {
        reflect_array(array, &lt.signs)
    } else {
        array.clone()
    };
    // dimension-2-first is native; dimension-1-first transposes into it
    let (target, a, b, transposed) = if lt.sigma[0] == 2 {
        (reflected, shape.0, shape.1, false)
    } else {
        (transpose(&reflected), shape.1, shape.0, true)
    };
    let hit = match engine {
        Engine::Pruned => pruned_type21(&target, a, b, counter)?,
        Engine::Naive => naive_type21(&target, a, b, counter, threads)?,
    };
    Ok(hit.map(|(rows, cols)| {
        let in_reflected = if transposed {
            Subgrid { indices: vec![cols, rows] }
        } else {
            Subgrid { indices: vec![rows, cols] }
        };
        reflect_subgrid_back(in_reflected, array.dims(), &lt.signs)
    }))
}

/// Exhaustive search for an `a x b` subgrid that is lexicographic of the
/// given type (or of any of the eight 2-D types when `lt` is `None`,
/// scanned in canonical order). `None` means proven absence; running out
/// of budget is an error.
pub fn brute_lex_subgrid(
    array: &RankArray,
    shape: (usize, usize),
    lt: Option<&LexType>,
    opts: &SearchOpts,
) -> Result<Option<(Subgrid, LexType)>> {
    let (result, _) = brute_lex_subgrid_counted(array, shape, lt, opts)?;
    Ok(result)
}

/// Like [`brute_lex_subgrid`], also reporting how many candidates or
/// search nodes were visited.
pub fn brute_lex_subgrid_counted(
    array: &RankArray,
    shape: (usize, usize),
    lt: Option<&LexType>,
    opts: &SearchOpts,
) -> Result<(Option<(Subgrid, LexType)>, u64)> {
    if array.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: array.dim() });
    }
    if shape.0 == 0 || shape.1 == 0 {
        return Err(Error::BadParameter("shape sides must be positive".into()));
    }
    let mut counter = Counter::new(&opts.budget);
    if shape.0 > array.dims()[0] || shape.1 > array.dims()[1] {
        return Ok((None, 0));
    }
    let types: Vec<LexType> = match lt {
        Some(t) => {
            if t.dim() != 2 {
                return Err(Error::DimensionMismatch { expected: 2, got: t.dim() });
            }
            vec![t.clone()]
        }
        None => LexType::enumerate_all(2),
    };
    for t in &types {
        if let Some(sub) =
            search_one_type(array, shape, t, &mut counter, opts.engine, opts.threads)?
        {
            return Ok((Some((sub, t.clone())), counter.visited));
        }
    }
    Ok((None, counter.visited))
}

/// Direct monotonicity check of a candidate subgrid, with the pattern.
fn verify_monotone_candidate(
    array: &RankArray,
    indices: &[Vec<usize>],
) -> Option<MonotonicityPattern> {
    let d = indices.len();
    let mut signs = Vec::with_capacity(d);
    for i in 0..d {
        if indices[i].len() == 1 {
            signs.push(Sign::Pos);
            continue;
        }
        let mut dim_sign: Option<Sign> = None;
        // iterate the other coordinates of the candidate
        let mut cursor = vec![0usize; d];
        let mut point = vec![0usize; d];
        let rest: usize =
            indices.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.len()).product();
        for _ in 0..rest {
            for (j, &c) in cursor.iter().enumerate() {
                point[j] = indices[j][c];
            }
            let mut prev = None;
            let mut line_sign: Option<Sign> = None;
            for &x in &indices[i] {
                point[i] = x;
                let r = array.rank_at(&point);
                if let Some(p) = prev {
                    let step = if r > p { Sign::Pos } else { Sign::Neg };
                    match line_sign {
                        None => line_sign = Some(step),
                        Some(s) if s != step => return None,
                        _ => {}
                    }
                }
                prev = Some(r);
            }
            match (dim_sign, line_sign) {
                (None, Some(s)) => dim_sign = Some(s),
                (Some(a), Some(b)) if a != b => return None,
                _ => {}
            }
            // odometer over dimensions other than i
            for j in 0..d {
                if j == i {
                    continue;
                }
                cursor[j] += 1;
                if cursor[j] < indices[j].len() {
                    break;
                }
                cursor[j] = 0;
            }
        }
        signs.push(dim_sign.unwrap_or(Sign::Pos));
    }
    Some(MonotonicityPattern { signs })
}

/// Exhaustive search for a monotone subgrid of the given shape, naive
/// enumeration in lexicographic order of the index-set tuple (dimension 1
/// most significant) with a per-row chain strategy in two dimensions.
pub fn brute_monotone_subgrid(
    array: &RankArray,
    shape: &[usize],
    opts: &SearchOpts,
) -> Result<Option<(Subgrid, MonotonicityPattern)>> {
    let (result, _) = brute_monotone_subgrid_counted(array, shape, opts)?;
    Ok(result)
}

/// Like [`brute_monotone_subgrid`], also reporting the candidate count.
pub fn brute_monotone_subgrid_counted(
    array: &RankArray,
    shape: &[usize],
    opts: &SearchOpts,
) -> Result<(Option<(Subgrid, MonotonicityPattern)>, u64)> {
    if shape.len() != array.dim() {
        return Err(Error::DimensionMismatch { expected: array.dim(), got: shape.len() });
    }
    if shape.contains(&0) {
        return Err(Error::BadParameter("shape sides must be positive".into()));
    }
    let mut counter = Counter::new(&opts.budget);
    if shape.iter().zip(array.dims()).any(|(&s, &n)| s > n) {
        return Ok((None, 0));
    }
    let result = if array.dim() == 2 && opts.engine == Engine::Pruned {
        pruned_monotone_2d(array, shape[0], shape[1], &mut counter)?
    } else {
        naive_monotone(array, shape, &mut counter)?
    };
    Ok((result, counter.visited))
}

fn naive_monotone(
    array: &RankArray,
    shape: &[usize],
    counter: &mut Counter,
) -> Result<Option<(Subgrid, MonotonicityPattern)>> {
    let d = array.dim();
    let mut subsets: Vec<Vec<usize>> =
        shape.iter().map(|&s| (1..=s).collect()).collect();
    loop {
        counter.tick()?;
        if let Some(pattern) = verify_monotone_candidate(array, &subsets) {
            return Ok(Some((Subgrid { indices: subsets }, pattern)));
        }
        // odometer with the last dimension fastest: tuple lex order with
        // dimension 1 most significant
        let mut dim = d;
        loop {
            if dim == 0 {
                return Ok(None);
            }
            dim -= 1;
            if next_subset(&mut subsets[dim], array.dims()[dim]) {
                break;
            }
            subsets[dim] = (1..=shape[dim]).collect();
        }
    }
}

/// 2-D monotone search: row sets in lexicographic order; for each row set
/// the columns that move consistently over it form chains under
/// componentwise order, checked per direction pair.
fn pruned_monotone_2d(
    array: &RankArray,
    a: usize,
    b: usize,
    counter: &mut Counter,
) -> Result<Option<(Subgrid, MonotonicityPattern)>> {
    let (n_rows, n_cols) = (array.dims()[0], array.dims()[1]);
    let mut rows: Vec<usize> = (1..=a).collect();
    loop {
        counter.tick()?;
        let mut best: Option<(Vec<usize>, MonotonicityPattern)> = None;
        for s1 in [Sign::Pos, Sign::Neg] {
            if a == 1 && s1 == Sign::Neg {
                break; // single-row candidates canonicalize to +1
            }
            // columns whose restriction to `rows` moves with sign s1
            let valid: Vec<usize> = (1..=n_cols)
                .filter(|&c| {
                    rows.windows(2).all(|w| {
                        let (lo, hi) = (array.rank_at(&[w[0], c]), array.rank_at(&[w[1], c]));
                        match s1 {
                            Sign::Pos => lo < hi,
                            Sign::Neg => lo > hi,
                        }
                    })
                })
                .collect();
            if valid.len() < b {
                continue;
            }
            for s2 in [Sign::Pos, Sign::Neg] {
                if b == 1 && s2 == Sign::Neg {
                    break;
                }
                if let Some(cols) = column_chain(array, &rows, &valid, b, s2) {
                    let pattern = MonotonicityPattern {
                        signs: vec![
                            if a == 1 { Sign::Pos } else { s1 },
                            if b == 1 { Sign::Pos } else { s2 },
                        ],
                    };
                    if best.as_ref().is_none_or(|(c, _)| cols < *c) {
                        best = Some((cols, pattern));
                    }
                }
            }
        }
        if let Some((cols, pattern)) = best {
            return Ok(Some((Subgrid { indices: vec![rows, cols] }, pattern)));
        }
        if !next_subset(&mut rows, n_rows) {
            return Ok(None);
        }
    }
}

/// Lexicographically smallest `b`-chain of columns from `valid` where
/// every row moves with sign `s2` along the chain.
fn column_chain(
    array: &RankArray,
    rows: &[usize],
    valid: &[usize],
    b: usize,
    s2: Sign,
) -> Option<Vec<usize>> {
    let m = valid.len();
    let edge = |i: usize, j: usize| -> bool {
        rows.iter().all(|&r| {
            let (x, y) = (array.rank_at(&[r, valid[i]]), array.rank_at(&[r, valid[j]]));
            match s2 {
                Sign::Pos => x < y,
                Sign::Neg => x > y,
            }
        })
    };
    // longest chain starting at each column
    let mut reach = vec![1usize; m];
    for i in (0..m).rev() {
        for j in i + 1..m {
            if edge(i, j) && reach[j] + 1 > reach[i] {
                reach[i] = reach[j] + 1;
            }
        }
    }
    let start = (0..m).find(|&i| reach[i] >= b)?;
    let mut picked = vec![valid[start]];
    let mut cur = start;
    let mut needed = b - 1;
    while needed > 0 {
        let next = (cur + 1..m).find(|&j| edge(cur, j) && reach[j] >= needed)?;
        picked.push(valid[next]);
        cur = next;
        needed -= 1;
    }
    Some(picked)
}

/// What kind of square [`max_square`] looks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareKind {
    Monotone,
    Lex,
}

/// Largest `n` such that an `n x ... x n` subgrid of the given kind
/// exists, by binary search over the brute searches. `Lex` requires a
/// 2-D array.
pub fn max_square(array: &RankArray, kind: SquareKind, opts: &SearchOpts) -> Result<usize> {
    if kind == SquareKind::Lex && array.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: array.dim() });
    }
    let exists = |n: usize, opts: &SearchOpts| -> Result<bool> {
        match kind {
            SquareKind::Monotone => {
                Ok(brute_monotone_subgrid(array, &vec![n; array.dim()], opts)?.is_some())
            }
            SquareKind::Lex => Ok(brute_lex_subgrid(array, (n, n), None, opts)?.is_some()),
        }
    };
    let (mut lo, mut hi) = (1usize, array.min_dim());
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if exists(mid, opts)? {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo)
}

/// One property check in a certificate.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub property: &'static str,
    pub pass: bool,
    /// A concrete violating subgrid when the check fails.
    pub witness: Option<Subgrid>,
}

/// Certificate for one construction at one parameter.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub construction: String,
    pub n: usize,
    pub checks: Vec<CheckOutcome>,
}

impl CertificateReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

impl std::fmt::Display for CertificateReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{} (n = {})", self.construction, self.n)?;
        for c in &self.checks {
            write!(f, "  {:<18} {}", c.property, if c.pass { "pass" } else { "FAIL" })?;
            if let Some(w) = &c.witness {
                write!(f, "  witness {:?}", w.indices)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A unit step violating monotnicity, as a 2-cell subgrid, if any.
fn increasing_witness(array: &RankArray) -> Option<Subgrid> {
    for dim in 1..=array.dim() {
        let stride = array.stride(dim);
        let n = array.dims()[dim - 1];
        for off in 0..array.len() {
            if (off / stride) % n + 1 < n && array.ranks()[off] >= array.ranks()[off + stride] {
                let point = array.point_of(off);
                let indices = point
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| {
                        if i + 1 == dim {
                            vec![x, x + 1]
                        } else {
                            vec![x]
                        }
                    })
                    .collect();
                return Some(Subgrid { indices });
            }
        }
    }
    None
}

/// Certifies the lower-bound construction at parameter `n`: the two
/// building blocks avoid their forbidden shapes, the assembled square is
/// increasing, and it contains no `n x n` subgrid of either 2-D type.
pub fn verify_f2_construction(n: usize, opts: &SearchOpts) -> Result<CertificateReport> {
    let g = crate::constructions::gen_block_g(n)?;
    let h = crate::constructions::gen_block_h(n)?;
    let f2 = crate::constructions::gen_f2_lower(n)?;
    verify_f2_arrays(n, &g, &h, &f2, opts)
}

/// Certificate over caller-supplied arrays, so corrupted inputs can be
/// exercised.
pub fn verify_f2_arrays(
    n: usize,
    g: &RankArray,
    h: &RankArray,
    f2: &RankArray,
    opts: &SearchOpts,
) -> Result<CertificateReport> {
    if n < 3 {
        return Err(Error::BadParameter("certificates start at n = 3".into()));
    }
    let side = 2 * n * n - 5 * n + 3;
    let expected = [
        (g.dims(), [(n - 1) * (n - 2), (n - 1) * (n - 1)], "g"),
        (h.dims(), [(n - 1) * (n - 1), (n - 1) * (n - 2)], "h"),
        (f2.dims(), [side, side], "f2"),
    ];
    for (got, want, name) in expected {
        if got != want {
            return Err(Error::BadParameter(format!(
                "{name} block has dims {got:?}, expected {want:?} at n = {n}"
            )));
        }
    }
    let type12 = LexType::of_sigma(vec![1, 2])?;
    let type21 = LexType::of_sigma(vec![2, 1])?;
    let mut checks = Vec::new();

    let inc_witness = if is_increasing(f2) { None } else { increasing_witness(f2) };
    checks.push(CheckOutcome {
        property: "increasing",
        pass: inc_witness.is_none(),
        witness: inc_witness,
    });

    let absent = |property: &'static str,
                      array: &RankArray,
                      shape: (usize, usize),
                      lt: &LexType|
     -> Result<CheckOutcome> {
        let hit = brute_lex_subgrid(array, shape, Some(lt), opts)?;
        Ok(CheckOutcome {
            property,
            pass: hit.is_none(),
            witness: hit.map(|(sub, _)| sub),
        })
    };
    checks.push(absent("G1", g, (n - 1, 2), &type12)?);
    checks.push(absent("G2", g, (n, 2), &type21)?);
    checks.push(absent("H1", h, (2, n), &type12)?);
    checks.push(absent("H2", h, (2, n - 1), &type21)?);

    let square12 = brute_lex_subgrid(f2, (n, n), Some(&type12), opts)?;
    let square21 = brute_lex_subgrid(f2, (n, n), Some(&type21), opts)?;
    let witness = square12.or(square21);
    checks.push(CheckOutcome {
        property: "no-lex-n-square",
        pass: witness.is_none(),
        witness: witness.map(|(sub, _)| sub),
    });

    Ok(CertificateReport { construction: "f2-lower".into(), n, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gen_block_g, gen_f2_lower, gen_lex, gen_random};
    use crate::grid::lex_type_check;
    use crate::rng::SeededRng;

    fn lt(sigma: &[usize], signs: &[i8]) -> LexType {
        LexType::new(
            sigma.to_vec(),
            signs.iter().map(|&s| Sign::from_i8(s).unwrap()).collect(),
        )
        .unwrap()
    }

    fn opts(engine: Engine) -> SearchOpts {
        SearchOpts { engine, ..SearchOpts::default() }
    }

    #[test]
    fn subset_unranking_matches_enumeration() {
        for m in 1..=8usize {
            for k in 1..=m.min(4) {
                let mut sub: Vec<usize> = (1..=k).collect();
                let mut rank: u128 = 0;
                loop {
                    assert_eq!(unrank_subset(m, k, rank), sub, "m={m} k={k} rank={rank}");
                    if !next_subset(&mut sub, m) {
                        break;
                    }
                    rank += 1;
                }
                assert_eq!(rank + 1, binomial(m, k));
            }
        }
    }

    #[test]
    fn lex_search_finds_prefix_of_lex_array() {
        let a = gen_lex(&[4, 4], &lt(&[1, 2], &[1, 1])).unwrap();
        let (sub, t) = brute_lex_subgrid(&a, (2, 2), Some(&lt(&[1, 2], &[1, 1])), &opts(Engine::Pruned))
            .unwrap()
            .unwrap();
        assert_eq!(sub.indices, vec![vec![1, 2], vec![1, 2]]);
        assert_eq!(t, lt(&[1, 2], &[1, 1]));
    }

    #[test]
    fn lex_search_certifies_lower_bound_at_three() {
        let a = gen_f2_lower(3).unwrap();
        let (hit, visited) =
            brute_lex_subgrid_counted(&a, (3, 3), None, &opts(Engine::Naive)).unwrap();
        assert!(hit.is_none());
        // full candidate space: 8 sign/permutation variants, C(6,3)^2 each
        assert_eq!(visited, 8 * 400);

        // the two unsigned types alone: 2 * C(6,3)^2 = 800
        let mut total = 0;
        for t in [lt(&[1, 2], &[1, 1]), lt(&[2, 1], &[1, 1])] {
            let (hit, v) =
                brute_lex_subgrid_counted(&a, (3, 3), Some(&t), &opts(Engine::Naive)).unwrap();
            assert!(hit.is_none());
            total += v;
        }
        assert_eq!(total, 800);
    }

    #[test]
    fn block_g_properties_at_four() {
        let g = gen_block_g(4).unwrap();
        let o = opts(Engine::Pruned);
        assert!(brute_lex_subgrid(&g, (3, 2), Some(&lt(&[1, 2], &[1, 1])), &o).unwrap().is_none());
        assert!(brute_lex_subgrid(&g, (4, 2), Some(&lt(&[2, 1], &[1, 1])), &o).unwrap().is_none());
    }

    #[test]
    fn pruned_matches_naive_on_small_arrays() {
        let mut rng = SeededRng::new(42);
        for _ in 0..60 {
            let dims = [2 + rng.below(5), 2 + rng.below(5)];
            let a = gen_random(&dims, rng.next_u64()).unwrap();
            let shape = (1 + rng.below(dims[0]), 1 + rng.below(dims[1]));
            for t in LexType::enumerate_all(2) {
                let p = brute_lex_subgrid(&a, shape, Some(&t), &opts(Engine::Pruned)).unwrap();
                let n = brute_lex_subgrid(&a, shape, Some(&t), &opts(Engine::Naive)).unwrap();
                assert_eq!(p, n, "dims {dims:?} shape {shape:?} type {t}");
                if let Some((sub, ty)) = p {
                    let r = a.restrict(&sub).unwrap();
                    assert!(lex_type_check(&r, &ty).unwrap());
                }
            }
        }
    }

    #[test]
    fn pruned_matches_naive_on_increasing_arrays() {
        // exercises the interval-chain existence gate in both outcomes
        let mut rng = SeededRng::new(9000);
        for _ in 0..40 {
            let dims = [3 + rng.below(5), 3 + rng.below(5)];
            let a = crate::constructions::gen_random_increasing(&dims, rng.next_u64()).unwrap();
            let shape = (2 + rng.below(dims[0] - 1), 2 + rng.below(dims[1] - 1));
            for t in [lt(&[1, 2], &[1, 1]), lt(&[2, 1], &[1, 1])] {
                let p = brute_lex_subgrid(&a, shape, Some(&t), &opts(Engine::Pruned)).unwrap();
                let n = brute_lex_subgrid(&a, shape, Some(&t), &opts(Engine::Naive)).unwrap();
                assert_eq!(p, n, "dims {dims:?} shape {shape:?} type {t}");
            }
        }
    }

    #[test]
    fn parallel_naive_matches_sequential() {
        let mut rng = SeededRng::new(4242);
        for _ in 0..20 {
            let a = gen_random(&[7, 7], rng.next_u64()).unwrap();
            let seq = brute_lex_subgrid(&a, (3, 3), None, &opts(Engine::Naive)).unwrap();
            let par = brute_lex_subgrid(
                &a,
                (3, 3),
                None,
                &SearchOpts { engine: Engine::Naive, threads: 4, ..Default::default() },
            )
            .unwrap();
            assert_eq!(seq, par);
        }
    }

    #[test]
    fn pruned_matches_naive_on_larger_shapes() {
        let mut rng = SeededRng::new(777);
        for _ in 0..10 {
            let dims = [6 + rng.below(3), 6 + rng.below(3)];
            let seed = rng.next_u64();
            for array in [
                gen_random(&dims, seed).unwrap(),
                crate::constructions::gen_random_increasing(&dims, seed).unwrap(),
            ] {
                for shape in [(4, 3), (3, 4), (2, 4), (4, 4)] {
                    for t in [lt(&[1, 2], &[1, 1]), lt(&[2, 1], &[1, 1])] {
                        let p =
                            brute_lex_subgrid(&array, shape, Some(&t), &opts(Engine::Pruned))
                                .unwrap();
                        let n =
                            brute_lex_subgrid(&array, shape, Some(&t), &opts(Engine::Naive))
                                .unwrap();
                        assert_eq!(p, n, "dims {dims:?} shape {shape:?} type {t}");
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_shapes_match_naive() {
        let mut rng = SeededRng::new(3131);
        for _ in 0..25 {
            let dims = [1 + rng.below(6), 1 + rng.below(6)];
            let a = gen_random(&dims, rng.next_u64()).unwrap();
            for shape in [(1, 1), (1, dims[1]), (dims[0], 1), (1, 2), (2, 1)] {
                if shape.0 > dims[0] || shape.1 > dims[1] {
                    continue;
                }
                for t in LexType::enumerate_all(2) {
                    let p = brute_lex_subgrid(&a, shape, Some(&t), &opts(Engine::Pruned))
                        .unwrap();
                    let n = brute_lex_subgrid(&a, shape, Some(&t), &opts(Engine::Naive))
                        .unwrap();
                    assert_eq!(p, n, "dims {dims:?} shape {shape:?} type {t}");
                }
            }
        }
    }

    #[test]
    fn parallel_naive_budget_matches_sequential() {
        // candidate budgets cut the same global enumeration point in both
        // modes, so found / absent / exceeded outcomes coincide
        let mut rng = SeededRng::new(910);
        for _ in 0..12 {
            let a = gen_random(&[6, 6], rng.next_u64()).unwrap();
            for cap in [1u64, 7, 50, 399, 400, 100_000] {
                let mk = |threads: usize| SearchOpts {
                    engine: Engine::Naive,
                    threads,
                    budget: SearchBudget::candidates(cap),
                };
                let seq = brute_lex_subgrid(&a, (2, 3), None, &mk(1));
                let par = brute_lex_subgrid(&a, (2, 3), None, &mk(5));
                match (&seq, &par) {
                    (Ok(x), Ok(y)) => assert_eq!(x, y, "cap {cap}"),
                    (Err(Error::BudgetExceeded { .. }), Err(Error::BudgetExceeded { .. })) => {}
                    other => panic!("outcome mismatch at cap {cap}: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn naive_monotone_counter_matches_closed_form() {
        let a = gen_f2_lower(3).unwrap();
        let (hit, visited) = brute_monotone_subgrid_counted(
            &a,
            &[6, 6],
            &opts(Engine::Naive),
        )
        .unwrap();
        assert!(hit.is_some(), "the whole increasing grid is monotone");
        assert_eq!(visited, 1, "first candidate is the full grid");

        // an absent search must exhaust the full product of subset counts
        let s = RankArray::new(vec![4], vec![1, 0, 3, 2]).unwrap();
        let (hit, visited) =
            brute_monotone_subgrid_counted(&s, &[3], &opts(Engine::Naive)).unwrap();
        assert!(hit.is_none());
        assert_eq!(visited, 4, "C(4,3) candidates");
    }

    #[test]
    fn budget_errors_are_distinct_from_absence() {
        let a = gen_f2_lower(3).unwrap();
        let tight = SearchOpts {
            engine: Engine::Naive,
            budget: SearchBudget::candidates(10),
            ..Default::default()
        };
        match brute_lex_subgrid(&a, (3, 3), None, &tight) {
            Err(Error::BudgetExceeded { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn monotone_search_examples() {
        // a 2x2 monotone block inside the mixed-direction example
        let a = RankArray::new(vec![3, 3], vec![0, 1, 2, 5, 4, 3, 6, 7, 8]).unwrap();
        let (sub, pattern) =
            brute_monotone_subgrid(&a, &[2, 2], &opts(Engine::Pruned)).unwrap().unwrap();
        let r = a.restrict(&sub).unwrap();
        assert_eq!(crate::grid::monotone_pattern(&r), Some(pattern));

        // whole increasing grid
        let inc = RankArray::new(vec![3, 3], (0..9).collect()).unwrap();
        let (sub, pattern) =
            brute_monotone_subgrid(&inc, &[3, 3], &opts(Engine::Pruned)).unwrap().unwrap();
        assert_eq!(sub, Subgrid::full(&[3, 3]));
        assert_eq!(pattern.signs, vec![Sign::Pos, Sign::Pos]);

        // no monotone triple in [1,0,3,2]
        let s = RankArray::new(vec![4], vec![1, 0, 3, 2]).unwrap();
        assert!(brute_monotone_subgrid(&s, &[3], &opts(Engine::Naive)).unwrap().is_none());
    }

    #[test]
    fn monotone_pruned_matches_naive() {
        let mut rng = SeededRng::new(77);
        for _ in 0..40 {
            let dims = [2 + rng.below(4), 2 + rng.below(4)];
            let a = gen_random(&dims, rng.next_u64()).unwrap();
            let shape = [1 + rng.below(dims[0]), 1 + rng.below(dims[1])];
            let p = brute_monotone_subgrid(&a, &shape, &opts(Engine::Pruned)).unwrap();
            let n = brute_monotone_subgrid(&a, &shape, &opts(Engine::Naive)).unwrap();
            assert_eq!(p, n, "dims {dims:?} shape {shape:?}");
        }
    }

    #[test]
    fn max_square_examples() {
        let a = gen_lex(&[5, 5], &lt(&[2, 1], &[-1, 1])).unwrap();
        assert_eq!(max_square(&a, SquareKind::Lex, &opts(Engine::Pruned)).unwrap(), 5);

        let f2 = gen_f2_lower(3).unwrap();
        assert_eq!(max_square(&f2, SquareKind::Lex, &opts(Engine::Pruned)).unwrap(), 2);
        assert_eq!(max_square(&f2, SquareKind::Monotone, &opts(Engine::Pruned)).unwrap(), 6);
    }

    #[test]
    fn certificate_passes_at_three_and_four() {
        for n in [3, 4] {
            let report = verify_f2_construction(n, &opts(Engine::Pruned)).unwrap();
            assert!(report.all_pass(), "{report}");
            assert_eq!(report.checks.len(), 6);
        }
    }

    #[test]
    fn corrupted_construction_fails_with_witness() {
        let g = gen_block_g(3).unwrap();
        let h = crate::constructions::gen_block_h(3).unwrap();
        let f2 = gen_f2_lower(3).unwrap();
        // swap two ranks inside the center region, breaking increase
        let mut ranks = f2.ranks().to_vec();
        let (i, j) = (f2.offset_of(&[3, 3]), f2.offset_of(&[4, 4]));
        ranks.swap(i, j);
        let bad = RankArray::new(vec![6, 6], ranks).unwrap();
        let report = verify_f2_arrays(3, &g, &h, &bad, &opts(Engine::Pruned)).unwrap();
        let inc = report.checks.iter().find(|c| c.property == "increasing").unwrap();
        assert!(!inc.pass);
        assert!(inc.witness.is_some());
    }
}
