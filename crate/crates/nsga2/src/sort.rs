use model_core::model::ObjectiveVector;
use model_core::pareto::dominates;

/// Indices grouped into successive non-domination fronts, best first.
pub fn fast_nondominated_sort(objs: &[ObjectiveVector]) -> Vec<Vec<usize>> {
    let n = objs.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    let mut fronts = vec![Vec::new()];
    for p in 0..n {
        for q in 0..n {
            if dominates(&objs[p], &objs[q]) {
                dominated_by[p].push(q);
            } else if dominates(&objs[q], &objs[p]) {
                count[p] += 1;
            }
        }
        if count[p] == 0 {
            fronts[0].push(p);
        }
    }
    if n == 0 {
        return Vec::new();
    }
    let mut r = 0;
    while !fronts[r].is_empty() {
        let mut next = Vec::new();
        for &p in &fronts[r] {
            for &q in &dominated_by[p] {
                count[q] -= 1;
                if count[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(next);
        r += 1;
    }
    fronts.pop();
    fronts
}

/// Crowding distance of each member of `front`, in the same order.
/// Boundary members get `+inf`; an objective with zero range adds nothing.
pub fn crowding_distance(objs: &[ObjectiveVector], front: &[usize]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    for o in 0..3 {
        let val = |a: usize| objs[front[a]].as_array()[o];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| val(a).total_cmp(&val(b)).then(a.cmp(&b)));
        let lo = val(order[0]);
        let hi = val(order[n - 1]);
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in 1..n - 1 {
            let a = order[w];
            if dist[a].is_finite() {
                dist[a] += (val(order[w + 1]) - val(order[w - 1])) / range;
            }
        }
    }
    dist
}
