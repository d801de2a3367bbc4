use std::path::{Path, PathBuf};

use super::ExperimentReport;
use crate::error::Result;
use crate::util::fmt_sig;

fn num(x: f64) -> String {
    fmt_sig(x, 9)
}

impl ExperimentReport {
    /// Every report file as `(file name, contents)`.
    ///
    /// * `report.json`: the full report
    /// * `quality.csv`, `duration.csv`, `speed.csv`: grid means of the
    ///   infected share, process length and diffusion speed per method
    /// * `jaccard_K{K}.csv`: seed overlap between methods for each `K`
    /// * `cells.csv`: long format `method,K,kappa,gamma,tau,eta`
    pub fn render(&self) -> Result<Vec<(String, String)>> {
        let mut files = vec![("report.json".to_string(), serde_json::to_string_pretty(self)? + "\n")];
        let table = |header: &str, f: fn(&super::MethodSummary) -> f64| {
            let mut out = format!("method,{header}\n");
            for s in &self.summaries {
                out.push_str(&format!("{},{}\n", s.method, num(f(s))));
            }
            out
        };
        files.push(("quality.csv".into(), table("gamma_pct", |s| s.gamma_pct)));
        files.push(("duration.csv".into(), table("tau_mean", |s| s.tau_mean)));
        files.push(("speed.csv".into(), table("eta", |s| s.eta)));
        for jt in &self.jaccard {
            let mut out = String::from("method");
            for m in &jt.methods {
                out.push_str(&format!(",{m}"));
            }
            out.push('\n');
            for (m, row) in jt.methods.iter().zip(&jt.matrix) {
                out.push_str(m.name());
                for v in row {
                    out.push(',');
                    out.push_str(&num(*v));
                }
                out.push('\n');
            }
            files.push((format!("jaccard_K{}.csv", jt.k), out));
        }
        let mut long = String::from("method,K,kappa,gamma,tau,eta\n");
        for r in &self.records {
            long.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.method,
                r.k,
                num(r.kappa),
                num(r.gamma_mean),
                num(r.tau_mean),
                num(r.eta)
            ));
        }
        files.push(("cells.csv".into(), long));
        Ok(files)
    }

    /// Writes [`render`](Self::render) output into `dir`, returning the paths.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        self.render()?
            .into_iter()
            .map(|(name, contents)| {
                let path = dir.join(name);
                std::fs::write(&path, contents)?;
                Ok(path)
            })
            .collect()
    }
}
