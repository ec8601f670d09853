//! Gram matrices for every graph kernel, written as CSV.
//!
//! ```bash
//! cargo run --release --example kernels
//! cargo run --release --example kernels -- wl:3 > gram.csv
//! ```

use graphkss::kernels::{gram_matrix, write_gram_csv, KernelSpec};
use graphkss::{ErgmModel, GeneratorSpec, Topology};

fn main() -> graphkss::Result<()> {
    let mut graphs = Vec::new();
    let mut ids = Vec::new();
    let sparse = ErgmModel::e2s(-2.0, 0.0, 12)?;
    let dense = ErgmModel::e2s(0.5, 0.0, 12)?;
    for k in 0..3 {
        graphs.push(sparse.sample(k));
        ids.push(format!("sparse-{k}"));
        graphs.push(dense.sample(k));
        ids.push(format!("dense-{k}"));
        graphs.push(GeneratorSpec::Grg { n: 12, r: 0.3, topology: Topology::Torus }.sample(k)?);
        ids.push(format!("grg-{k}"));
    }

    if let Some(arg) = std::env::args().nth(1) {
        let spec: KernelSpec = arg.parse()?;
        return write_gram_csv(&ids, &gram_matrix(&spec, &graphs)?, std::io::stdout());
    }

    // kernel strings are also what experiment configs accept
    for text in ["const", "gveh:5", "krw:3", "grw:0.001", "sp", "wl:1", "wl:3", "glet:3", "glet:4", "conglet:4"] {
        let spec: KernelSpec = text.parse()?;
        let gram = gram_matrix(&spec, &graphs)?;
        // cosine between the first sparse and the first dense graph
        let cos = gram[(0, 1)] / (gram[(0, 0)] * gram[(1, 1)]).sqrt();
        let eig = gram.clone().symmetric_eigen().eigenvalues;
        println!("{text:>10}: k(sparse,dense) normalised {cos:.3}, eigenvalues in [{:.2e}, {:.2e}]", eig.min(), eig.max());
    }
    Ok(())
}
