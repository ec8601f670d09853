//! A small power curve, first through the library and then through the
//! config-driven experiment runner used by the `graphkss` binary.
//!
//! ```bash
//! cargo run --release --example power_curve
//! ```

use graphkss::experiments::{cmd_power_curve, ConfigFile, RunOptions};
use graphkss::{rejection_rate, ErgmModel, GeneratorSpec, KernelSpec, NullModel, TestConfig};

fn main() -> graphkss::Result<()> {
    let null = ErgmModel::e2s(-2.0, 0.0, 15)?;
    let cfg = TestConfig {
        resample_size: 100,
        simulations: 100,
        ..TestConfig::new(NullModel::Ergm(null), KernelSpec::Constant)
    };
    for b2 in [-0.4, 0.0, 0.4] {
        let alt = GeneratorSpec::Ergm(ErgmModel::e2s(-2.0, b2, 15)?);
        let rate = rejection_rate(&alt, &cfg, 40, 1)?;
        println!("beta2 {b2:+.1}: rejection rate {:.3} +- {:.3}", rate.rate, rate.stderr);
    }

    let text = "
experiment = power-curve
name = e2s-small
[null]
model = e2s
n = 15
beta = [-2.0, 0.0]
[alternative]
parameter = beta2
values = [-0.4, 0.0, 0.4]
[test]
kernels = [const, wl:1]
b = 100
l = 100
trials = 40
";
    let out = std::env::temp_dir().join("graphkss-power.csv");
    let _ = std::fs::remove_file(&out);
    let opts = RunOptions { out: out.clone(), seed: 1, workers: 1 };
    let summary = cmd_power_curve(&ConfigFile::parse(text)?, &opts)?;
    println!("{} cells computed", summary.computed.len());
    print!("{}", std::fs::read_to_string(&out)?);

    // rerunning skips every finished cell
    let again = cmd_power_curve(&ConfigFile::parse(text)?, &opts)?;
    println!("rerun: {} computed, {} skipped", again.computed.len(), again.skipped);
    Ok(())
}
