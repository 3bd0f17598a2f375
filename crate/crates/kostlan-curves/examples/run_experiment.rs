//! Drive an experiment from code instead of the command line: configure,
//! run, inspect the summary, and write the same trials.csv / summary.json /
//! report.md bundle the binary produces.

use kostlan_curves::experiments::{run, ExperimentConfig, ExperimentKind, OutputFormat};

fn main() {
    let mut cfg = ExperimentConfig::new(ExperimentKind::UnivariateRoots);
    cfg.d = vec![4, 16, 64];
    cfg.trials = 2000;
    cfg.seed = 7;
    cfg.validate().unwrap();

    let report = run(&cfg).unwrap();
    println!("columns: {:?}", report.table.columns);
    println!("rows:    {}", report.table.rows.len());
    println!("summary:\n{}", serde_json::to_string_pretty(&report.summary).unwrap());
    if report.violations.is_empty() {
        println!("no invariant violations");
    } else {
        for v in &report.violations {
            println!("VIOLATION: {v}");
        }
    }

    let dir = std::env::temp_dir().join("kostlan-demo-run");
    report.write_outputs(&dir, OutputFormat::Csv).unwrap();
    for name in ["trials.csv", "summary.json", "report.md"] {
        let len = std::fs::metadata(dir.join(name)).unwrap().len();
        println!("wrote {} ({len} bytes)", dir.join(name).display());
    }
}
