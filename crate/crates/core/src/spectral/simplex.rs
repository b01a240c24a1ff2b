use super::problem::Problem;
use super::strategy::{derive_seed, Ascent, AscentStrategy, Stall, StartPoint, HANDOFF};
use super::SolverOptions;

/// `p = 1`: replicator ascent on the faces of the simplex that can carry a
/// maximizer.
///
/// Some maximizer has a support `S` in which every pair of vertices lies in
/// an edge contained in `S` (otherwise mass can be moved between an
/// uncovered pair without loss until one of them vanishes). Those faces are
/// the cliques of the 2-shadow that pass the coverage filter.
pub struct SimplexSupport;

/// Random starts per face in addition to the uniform one.
const RANDOM_PER_FACE: usize = 4;

impl AscentStrategy for SimplexSupport {
    fn name(&self) -> &'static str {
        "simplex-support"
    }

    fn applicable(&self, _rank: usize, p: f64) -> bool {
        p == 1.0
    }

    fn starts(&self, problem: &Problem, opts: &SolverOptions) -> Vec<StartPoint> {
        let extra = opts.restarts.saturating_sub(1).min(RANDOM_PER_FACE);
        let mut out = Vec::new();
        for face in covered_faces(problem) {
            for j in 0..=extra {
                let support = Some(face.clone());
                out.push(if j == 0 {
                    StartPoint::Uniform { support }
                } else {
                    let seed = derive_seed(opts.seed, out.len() as u64);
                    StartPoint::Random { support, seed }
                });
            }
        }
        out
    }

    fn ascend(&self, problem: &Problem, mut x: Vec<f64>, opts: &SolverOptions) -> Ascent {
        let r = problem.rank() as f64;
        let mut g = vec![0.0; x.len()];
        let mut stall = Stall::new();
        for it in 0..opts.max_iters {
            let lambda = problem.gradient_and_value(&x, &mut g);
            if lambda <= 0.0 {
                return Ascent { x, iterations: it };
            }
            if problem.residual(&x, &g, lambda) <= HANDOFF * lambda.max(1.0) || stall.stalled(lambda) {
                return Ascent { x, iterations: it };
            }
            for i in 0..x.len() {
                x[i] *= g[i] / (r * lambda);
                if x[i] < 1e-15 {
                    x[i] = 0.0;
                }
            }
            problem.normalize(&mut x);
        }
        Ascent { x, iterations: opts.max_iters }
    }
}

/// Vertex sets of size at least `r` whose every pair lies in an edge inside
/// the set, in lexicographic order.
pub(crate) fn covered_faces(problem: &Problem) -> Vec<Vec<usize>> {
    let n = problem.n();
    let r = problem.rank();
    let mut shadow = vec![vec![false; n]; n];
    for e in problem.edges() {
        for &a in e {
            for &b in e {
                shadow[a][b] = a != b;
            }
        }
    }
    let mut faces = Vec::new();
    let mut current = Vec::new();
    extend(problem, &shadow, r, 0, &mut current, &mut faces);
    faces
}

fn extend(
    problem: &Problem,
    shadow: &[Vec<bool>],
    r: usize,
    from: usize,
    current: &mut Vec<usize>,
    faces: &mut Vec<Vec<usize>>,
) {
    if current.len() >= r && pairs_covered(problem, current) {
        faces.push(current.clone());
    }
    for v in from..shadow.len() {
        if current.iter().all(|&u| shadow[u][v]) {
            current.push(v);
            extend(problem, shadow, r, v + 1, current, faces);
            current.pop();
        }
    }
}

fn pairs_covered(problem: &Problem, set: &[usize]) -> bool {
    let inside: Vec<&Vec<usize>> =
        problem.edges().iter().filter(|e| e.iter().all(|v| set.binary_search(v).is_ok())).collect();
    set.iter()
        .enumerate()
        .all(|(i, &a)| set[i + 1..].iter().all(|&b| inside.iter().any(|e| e.contains(&a) && e.contains(&b))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faces_of_a_graph_are_its_cliques() {
        // triangle plus pendant edge
        let p = Problem::new(2, 4, 1.0, vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![2, 3]]);
        let faces = covered_faces(&p);
        assert_eq!(faces, vec![vec![0, 1], vec![0, 1, 2], vec![0, 2], vec![1, 2], vec![2, 3]]);
    }

    #[test]
    fn faces_need_covering_edges_inside() {
        // {0,1,2},{0,3,4}: {0,1,2,3,4} is not covered (1,3 uncovered)
        let p = Problem::new(3, 5, 1.0, vec![vec![0, 1, 2], vec![0, 3, 4]]);
        assert_eq!(covered_faces(&p), vec![vec![0, 1, 2], vec![0, 3, 4]]);
    }
}
