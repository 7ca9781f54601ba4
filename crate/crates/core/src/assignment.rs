//! Exact assignment and bipartite matching solvers.

use std::collections::VecDeque;

/// Dense square cost matrix, row-major.
#[derive(Clone, Debug)]
pub struct CostMatrix {
    n: usize,
    data: Vec<f64>,
}

impl CostMatrix {
    pub fn new(n: usize, fill: f64) -> Self {
        Self {
            n,
            data: vec![fill; n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, cost: f64) {
        self.data[row * self.n + col] = cost;
    }
}

/// Minimum-cost perfect assignment (Hungarian method with row potentials,
/// shortest augmenting paths, `O(n³)`).
///
/// Returns `col_of_row` and the total cost. Costs must be finite; use a
/// large finite value for forbidden cells.
pub fn hungarian(costs: &CostMatrix) -> (Vec<usize>, f64) {
    let n = costs.n;
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    // 1-based with a virtual column 0, following the classic formulation
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut row_of_col = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0f64; n + 1];
    let mut used = vec![false; n + 1];
    for i in 1..=n {
        row_of_col[0] = i;
        let mut j0 = 0usize;
        minv.iter_mut().for_each(|m| *m = f64::INFINITY);
        used.iter_mut().for_each(|b| *b = false);
        loop {
            used[j0] = true;
            let i0 = row_of_col[j0];
            let row = &costs.data[(i0 - 1) * n..i0 * n];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = row[j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of_col[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of_row = vec![0usize; n];
    for j in 1..=n {
        col_of_row[row_of_col[j] - 1] = j - 1;
    }
    let total = col_of_row
        .iter()
        .enumerate()
        .map(|(r, &c)| costs.get(r, c))
        .sum();
    (col_of_row, total)
}

/// Maximum bipartite matching size (Hopcroft–Karp).
///
/// `adj[l]` lists the right vertices adjacent to left vertex `l`.
pub fn max_matching(adj: &[Vec<usize>], n_right: usize) -> usize {
    const FREE: usize = usize::MAX;
    let n_left = adj.len();
    let mut match_l = vec![FREE; n_left];
    let mut match_r = vec![FREE; n_right];
    let mut dist = vec![0usize; n_left];
    let mut size = 0;
    loop {
        // layered BFS from free left vertices
        let mut queue = VecDeque::new();
        for l in 0..n_left {
            if match_l[l] == FREE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let next = match_r[r];
                if next == FREE {
                    found = true;
                } else if dist[next] == usize::MAX {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            return size;
        }
        let mut iter = vec![0usize; n_left];
        for l in 0..n_left {
            if match_l[l] == FREE && augment(l, adj, &mut match_l, &mut match_r, &mut dist, &mut iter) {
                size += 1;
            }
        }
    }
}

fn augment(
    root: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
    iter: &mut [usize],
) -> bool {
    const FREE: usize = usize::MAX;
    // explicit stack: deep augmenting paths would overflow recursion on big inputs
    let mut stack = vec![root];
    while let Some(&l) = stack.last() {
        if iter[l] < adj[l].len() {
            let r = adj[l][iter[l]];
            iter[l] += 1;
            let next = match_r[r];
            if next == FREE {
                // flip the path recorded on the stack
                let mut r_cur = r;
                while let Some(l_cur) = stack.pop() {
                    let prev = match_l[l_cur];
                    match_l[l_cur] = r_cur;
                    match_r[r_cur] = l_cur;
                    r_cur = prev;
                }
                return true;
            }
            if dist[next] == dist[l] + 1 {
                stack.push(next);
            }
        } else {
            dist[l] = usize::MAX;
            stack.pop();
        }
    }
    false
}
