use difflab::topology::*;
use difflab::Error;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn reachable(graph: &NetworkGraph) -> usize {
    let n = graph.n_nodes();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &v in graph.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.iter().filter(|s| **s).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_graphs_are_connected_and_simple(n in 2usize..40, frac in 0.4..1.0f64, seed in any::<u64>()) {
        let degree = (frac * (n - 1) as f64).max(1.0_f64.min((n - 1) as f64));
        let g = generate_random_graph(n, degree, seed).unwrap();
        prop_assert_eq!(reachable(&g), n);
        prop_assert!(g.is_connected());
        for k in 0..n {
            prop_assert!(!g.neighbors(k).contains(&k));
            for &l in g.neighbors(k) {
                prop_assert!(g.neighbors(l).contains(&k));
            }
            prop_assert_eq!(g.neighborhood(k).len(), g.degree(k) + 1);
        }
    }

    #[test]
    fn metropolis_is_symmetric_doubly_stochastic(n in 2usize..40, frac in 0.4..1.0f64, seed in any::<u64>()) {
        let degree = (frac * (n - 1) as f64).max(1.0_f64.min((n - 1) as f64));
        let g = generate_random_graph(n, degree, seed).unwrap();
        let m = metropolis_weights(&g);
        m.validate(&g).unwrap();
        let a = m.matrix();
        for i in 0..n {
            prop_assert!((a.row(i).sum() - 1.0).abs() < 1e-12);
            prop_assert!((a.column(i).sum() - 1.0).abs() < 1e-12);
            for j in 0..n {
                prop_assert!((a[(i, j)] - a[(j, i)]).abs() < 1e-15);
                prop_assert!(a[(i, j)] >= 0.0);
                if i != j && g.contains_edge(i, j) {
                    let expected = 1.0 / g.degree(i).max(g.degree(j)) as f64;
                    prop_assert_eq!(a[(i, j)], expected);
                }
            }
        }
    }

    #[test]
    fn edge_list_round_trips(n in 2usize..30, seed in any::<u64>()) {
        let g = generate_random_graph(n, (0.5 * n as f64).min((n - 1) as f64), seed).unwrap();
        let back = NetworkGraph::from_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(back, g);
    }
}

#[test]
fn same_seed_same_graph() {
    let a = generate_random_graph(20, 3.0, 7).unwrap();
    let b = generate_random_graph(20, 3.0, 7).unwrap();
    assert_eq!(a, b);
}

#[test]
fn violations_are_reported() {
    let g = NetworkGraph::path(3).unwrap();
    let sparse = DMatrix::from_row_slice(3, 3, &[0.5, 0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.5, 0.5]);
    let m = CombinationMatrix::new(sparse, MatrixRole::Combination).unwrap();
    assert!(matches!(m.validate(&g), Err(Error::Combination(Violation::Sparsity { l: 0, k: 2, .. }))));

    let sums = DMatrix::from_row_slice(3, 3, &[0.5, 0.5, 0.0, 0.5, 0.4, 0.5, 0.0, 0.0, 0.5]);
    let m = CombinationMatrix::new(sums, MatrixRole::Adaptation).unwrap();
    assert!(matches!(m.validate(&g), Err(Error::Combination(Violation::WeightSum { k: 1, .. }))));

    let range = DMatrix::from_row_slice(3, 3, &[1.2, 0.5, 0.0, -0.2, 0.5, 0.5, 0.0, 0.0, 0.5]);
    let m = CombinationMatrix::new(range, MatrixRole::Adaptation).unwrap();
    assert!(matches!(m.validate(&g), Err(Error::Combination(Violation::Range { .. }))));
}

#[test]
fn disconnected_edge_lists_are_rejected() {
    assert!(NetworkGraph::from_edges(4, &[(0, 1), (2, 3)]).is_err());
    assert!(NetworkGraph::from_edges(3, &[(0, 1), (1, 1), (1, 2)]).is_err());
}
