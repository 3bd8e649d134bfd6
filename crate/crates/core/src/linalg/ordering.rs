use std::collections::VecDeque;

/// Symmetrized adjacency lists of a square pattern without its diagonal.
pub(crate) fn adjacency(pattern: &[(usize, usize)], n: usize) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in pattern {
        if i != j {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    adj
}

/// Reverse Cuthill-McKee ordering; `order[k]` is the old index placed at `k`.
pub fn reverse_cuthill_mckee(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (adj[v].len(), v));
    for &seed in &by_degree {
        if visited[seed] {
            continue;
        }
        let start = pseudo_peripheral(adj, seed);
        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (adj[w].len(), w));
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// Breadth-first levels from `root`: the last level and the eccentricity.
fn last_level(adj: &[Vec<usize>], root: usize) -> (Vec<usize>, usize) {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut far = 0;
    let mut reached = vec![root];
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                far = far.max(dist[w]);
                queue.push_back(w);
                reached.push(w);
            }
        }
    }
    (reached.into_iter().filter(|&v| dist[v] == far).collect(), far)
}

fn pseudo_peripheral(adj: &[Vec<usize>], seed: usize) -> usize {
    let mut root = seed;
    let (mut level, mut ecc) = last_level(adj, root);
    for _ in 0..8 {
        let cand = *level
            .iter()
            .min_by_key(|&&v| (adj[v].len(), v))
            .expect("nonempty level");
        let (l, e) = last_level(adj, cand);
        if e <= ecc {
            break;
        }
        root = cand;
        level = l;
        ecc = e;
    }
    root
}

/// Lower and upper bandwidth of a pattern under `order`.
pub fn bandwidths(pattern: &[(usize, usize)], order: &[usize]) -> (usize, usize) {
    let mut pos = vec![0; order.len()];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let (mut kl, mut ku) = (0, 0);
    for &(i, j) in pattern {
        let (pi, pj) = (pos[i], pos[j]);
        if pi > pj {
            kl = kl.max(pi - pj);
        } else {
            ku = ku.max(pj - pi);
        }
    }
    (kl, ku)
}
