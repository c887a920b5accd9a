//! Builds a random connected network, prints its degrees and Metropolis
//! weights, and checks them against the combination-matrix constraints.
//!
//! cargo run --example network_topology -- [nodes] [avg_degree] [seed]

use difflab::topology::{generate_random_graph, metropolis_weights};

fn main() -> difflab::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let nodes = args.first().map_or(Ok(8), |s| s.parse()).expect("nodes");
    let degree = args.get(1).map_or(Ok(3.0), |s| s.parse()).expect("avg_degree");
    let seed = args.get(2).map_or(Ok(7), |s| s.parse()).expect("seed");

    let graph = generate_random_graph(nodes, degree, seed)?;
    println!("{} nodes, {} edges, mean degree {:.2}", nodes, graph.edges().len(), graph.mean_degree());
    for k in 0..nodes {
        println!("node {k:2}: degree {} neighbors {:?}", graph.degree(k), graph.neighbors(k));
    }

    let weights = metropolis_weights(&graph);
    weights.validate(&graph)?;
    println!("\nMetropolis weights (column k = weights used by node k):");
    for l in 0..nodes {
        let row: Vec<String> = (0..nodes).map(|k| format!("{:5.3}", weights.entry(l, k))).collect();
        println!("  {}", row.join(" "));
    }
    println!("\nedge list:\n{}", graph.to_edge_list());
    Ok(())
}
