//! Two-parameter Nelder-Mead simplex minimizer with fixed, deterministic
//! behavior: no random restarts, fixed iteration caps, tie-free ordering.

/// Convergence and iteration controls.
#[derive(Clone, Copy, Debug)]
pub struct NelderMead {
    pub max_iter: usize,
    pub x_tol: f64,
    pub f_tol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_iter: 600,
            x_tol: 1e-11,
            f_tol: 1e-14,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MinimizeResult {
    pub x: [f64; 2],
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimize `f` over R² starting from `start` with an initial simplex of
/// edge `scale`. Standard reflection/expansion/contraction/shrink
/// coefficients (1, 2, 1/2, 1/2).
pub fn minimize<F>(mut f: F, start: [f64; 2], scale: f64, opts: &NelderMead) -> MinimizeResult
where
    F: FnMut([f64; 2]) -> f64,
{
    let mut evals = 0usize;
    let mut eval = |p: [f64; 2], evals: &mut usize| {
        *evals += 1;
        f(p)
    };

    let mut simplex = [
        start,
        [start[0] + scale, start[1]],
        [start[0], start[1] + scale],
    ];
    let mut values = [
        eval(simplex[0], &mut evals),
        eval(simplex[1], &mut evals),
        eval(simplex[2], &mut evals),
    ];

    let mut iterations = 0usize;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;
        // order ascending by value (stable for determinism)
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let [best, mid, worst] = order;

        let spread = (values[worst] - values[best]).abs();
        let size = simplex_size(&simplex);
        if spread <= opts.f_tol && size <= opts.x_tol {
            converged = true;
            break;
        }

        let centroid = [
            0.5 * (simplex[best][0] + simplex[mid][0]),
            0.5 * (simplex[best][1] + simplex[mid][1]),
        ];
        let reflect = [
            2.0 * centroid[0] - simplex[worst][0],
            2.0 * centroid[1] - simplex[worst][1],
        ];
        let f_reflect = eval(reflect, &mut evals);

        if f_reflect < values[best] {
            let expand = [
                centroid[0] + 2.0 * (reflect[0] - centroid[0]),
                centroid[1] + 2.0 * (reflect[1] - centroid[1]),
            ];
            let f_expand = eval(expand, &mut evals);
            if f_expand < f_reflect {
                simplex[worst] = expand;
                values[worst] = f_expand;
            } else {
                simplex[worst] = reflect;
                values[worst] = f_reflect;
            }
        } else if f_reflect < values[mid] {
            simplex[worst] = reflect;
            values[worst] = f_reflect;
        } else {
            let contract_point = if f_reflect < values[worst] {
                [
                    centroid[0] + 0.5 * (reflect[0] - centroid[0]),
                    centroid[1] + 0.5 * (reflect[1] - centroid[1]),
                ]
            } else {
                [
                    centroid[0] + 0.5 * (simplex[worst][0] - centroid[0]),
                    centroid[1] + 0.5 * (simplex[worst][1] - centroid[1]),
                ]
            };
            let f_contract = eval(contract_point, &mut evals);
            if f_contract < values[worst].min(f_reflect) {
                simplex[worst] = contract_point;
                values[worst] = f_contract;
            } else {
                // shrink toward the best vertex
                for idx in [mid, worst] {
                    simplex[idx] = [
                        simplex[best][0] + 0.5 * (simplex[idx][0] - simplex[best][0]),
                        simplex[best][1] + 0.5 * (simplex[idx][1] - simplex[best][1]),
                    ];
                    values[idx] = eval(simplex[idx], &mut evals);
                }
            }
        }
    }

    let mut best_idx = 0;
    for i in 1..3 {
        if values[i] < values[best_idx] {
            best_idx = i;
        }
    }
    MinimizeResult {
        x: simplex[best_idx],
        value: values[best_idx],
        iterations,
        evaluations: evals,
        converged,
    }
}

fn simplex_size(simplex: &[[f64; 2]; 3]) -> f64 {
    let mut size = 0.0f64;
    for i in 1..3 {
        let dx = simplex[i][0] - simplex[0][0];
        let dy = simplex[i][1] - simplex[0][1];
        size = size.max(dx.abs()).max(dy.abs());
    }
    size
}
