//! Discrete-time SIR Monte Carlo with infection-age dependent infectiousness.
//!
//! Seeds start infected at age 0. At the beginning of every period each
//! infected node ages by one; a node of age `r` in `1..=L` transmits with
//! rate `alpha[r-1]`, scaled by the relative infectiousness `kappa` and the
//! arc weight. New infections take effect at the end of the period
//! (synchronous update), and nodes that reached age `L` recover. The process
//! stops after the first period that leaves no infected node.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::util::stream_rng;

/// How several infectious in-neighbours combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransmissionMode {
    /// One independent Bernoulli trial per infectious in-neighbour.
    PerEdge,
    /// A single trial with the clamped sum of the per-edge probabilities.
    SummedClamped,
}

impl std::str::FromStr for TransmissionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "per_edge" | "per-edge" => Ok(TransmissionMode::PerEdge),
            "summed_clamped" | "summed-clamped" => Ok(TransmissionMode::SummedClamped),
            other => Err(Error::invalid(format!(
                "unknown transmission mode `{other}` (expected per_edge or summed_clamped)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SirConfig {
    /// Number of periods a node stays infectious (`L`).
    pub infectious_periods: usize,
    /// Infectiousness per infection-age period, `alpha[r-1]` for age `r`.
    pub alpha: Vec<f64>,
    /// Relative infectiousness multiplying every `alpha`.
    pub kappa: f64,
    pub iterations: usize,
    pub rng_seed: u64,
    pub mode: TransmissionMode,
}

impl Default for SirConfig {
    fn default() -> Self {
        SirConfig {
            infectious_periods: 2,
            alpha: vec![0.30, 0.15],
            kappa: 0.5,
            iterations: 300,
            rng_seed: 0,
            mode: TransmissionMode::PerEdge,
        }
    }
}

impl SirConfig {
    pub fn validate(&self) -> Result<()> {
        if self.infectious_periods < 1 {
            return Err(Error::invalid("L must be at least 1"));
        }
        if self.alpha.len() != self.infectious_periods {
            return Err(Error::invalid(format!(
                "alpha has {} entries but L = {}",
                self.alpha.len(),
                self.infectious_periods
            )));
        }
        if let Some(a) = self.alpha.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(Error::invalid(format!("alpha entry {a} outside [0, 1]")));
        }
        if !(0.0..=1.0).contains(&self.kappa) {
            return Err(Error::invalid(format!("kappa {} outside [0, 1]", self.kappa)));
        }
        if self.iterations < 1 {
            return Err(Error::invalid("iterations must be at least 1"));
        }
        Ok(())
    }

    fn rate(&self, age: u32) -> f64 {
        self.kappa * self.alpha[age as usize - 1]
    }
}

/// Probability that a susceptible node is infected in one period, given its
/// infectious in-neighbours as `(weight, infection age)` pairs.
pub fn transmission_probability(contacts: &[(f64, u32)], cfg: &SirConfig) -> f64 {
    match cfg.mode {
        TransmissionMode::PerEdge => {
            let escape: f64 = contacts
                .iter()
                .map(|&(w, age)| 1.0 - (cfg.rate(age) * w).min(1.0))
                .product();
            1.0 - escape
        }
        TransmissionMode::SummedClamped => contacts.iter().map(|&(w, age)| cfg.rate(age) * w).sum::<f64>().min(1.0),
    }
}

/// Per-node compartment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Susceptible,
    /// Infected, with the number of periods since infection.
    Infected(u32),
    Recovered,
}

/// Compartment sizes at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counts {
    pub susceptible: usize,
    pub infected: usize,
    pub recovered: usize,
}

/// One replication, advanced one period at a time.
pub struct SirProcess<'a> {
    graph: &'a Graph,
    cfg: &'a SirConfig,
    status: Vec<Status>,
    infected: Vec<usize>,
    period: usize,
    ever_infected: usize,
    // Scratch buffers reused across periods.
    mark: Vec<bool>,
    candidates: Vec<usize>,
    contacts: Vec<(f64, u32)>,
}

impl<'a> SirProcess<'a> {
    pub fn new(graph: &'a Graph, seeds: &[usize], cfg: &'a SirConfig) -> Result<Self> {
        let n = graph.node_count();
        let mut status = vec![Status::Susceptible; n];
        let mut infected = Vec::with_capacity(seeds.len());
        for &s in seeds {
            if s >= n {
                return Err(Error::UnknownNode(format!("#{s}")));
            }
            if status[s] == Status::Susceptible {
                status[s] = Status::Infected(0);
                infected.push(s);
            }
        }
        infected.sort_unstable();
        Ok(SirProcess {
            graph,
            cfg,
            status,
            ever_infected: infected.len(),
            infected,
            period: 0,
            mark: vec![false; n],
            candidates: Vec::new(),
            contacts: Vec::new(),
        })
    }

    pub fn is_active(&self) -> bool {
        !self.infected.is_empty()
    }

    /// Periods executed so far.
    pub fn period(&self) -> usize {
        self.period
    }

    pub fn status(&self) -> &[Status] {
        &self.status
    }

    pub fn ever_infected_count(&self) -> usize {
        self.ever_infected
    }

    /// Recounts every compartment from the per-node status.
    pub fn counts(&self) -> Counts {
        let mut c = Counts {
            susceptible: 0,
            infected: 0,
            recovered: 0,
        };
        for s in &self.status {
            match s {
                Status::Susceptible => c.susceptible += 1,
                Status::Infected(_) => c.infected += 1,
                Status::Recovered => c.recovered += 1,
            }
        }
        c
    }

    /// Runs one period. Does nothing once the process has died out.
    pub fn step(&mut self, rng: &mut ChaCha8Rng) {
        if !self.is_active() {
            return;
        }
        let g = self.graph;
        let cfg = self.cfg;
        for &v in &self.infected {
            if let Status::Infected(age) = &mut self.status[v] {
                *age += 1;
            }
        }
        self.candidates.clear();
        for &v in &self.infected {
            for &(t, _) in g.out_arcs(v) {
                if self.status[t] == Status::Susceptible && !self.mark[t] {
                    self.mark[t] = true;
                    self.candidates.push(t);
                }
            }
        }
        self.candidates.sort_unstable();
        let mut newly = Vec::new();
        for &i in &self.candidates {
            self.mark[i] = false;
            let status = &self.status;
            let infectious = g.in_arcs(i).iter().filter_map(|&(j, w)| match status[j] {
                Status::Infected(age) if age >= 1 => Some((w, age)),
                _ => None,
            });
            let hit = match cfg.mode {
                TransmissionMode::PerEdge => {
                    let mut hit = false;
                    for (w, age) in infectious {
                        let p = (cfg.rate(age) * w).min(1.0);
                        if p > 0.0 && rng.random::<f64>() < p {
                            hit = true;
                            break;
                        }
                    }
                    hit
                }
                TransmissionMode::SummedClamped => {
                    self.contacts.clear();
                    self.contacts.extend(infectious);
                    let p = transmission_probability(&self.contacts, cfg);
                    p > 0.0 && rng.random::<f64>() < p
                }
            };
            if hit {
                newly.push(i);
            }
        }
        let mut still = Vec::with_capacity(self.infected.len() + newly.len());
        for &v in &self.infected {
            match self.status[v] {
                Status::Infected(age) if age as usize >= cfg.infectious_periods => {
                    self.status[v] = Status::Recovered;
                }
                _ => still.push(v),
            }
        }
        for &v in &newly {
            self.status[v] = Status::Infected(0);
        }
        self.ever_infected += newly.len();
        still.extend(newly);
        still.sort_unstable();
        self.infected = still;
        self.period += 1;
    }
}

/// Result of one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct SirRun {
    /// Nodes infected at any time, seeds included, in ascending order.
    pub ever_infected: Vec<usize>,
    /// Number of periods executed.
    pub tau: usize,
}

pub fn run_sir_once(g: &Graph, seeds: &[usize], cfg: &SirConfig, rng: &mut ChaCha8Rng) -> Result<SirRun> {
    cfg.validate()?;
    let mut process = SirProcess::new(g, seeds, cfg)?;
    while process.is_active() {
        process.step(rng);
    }
    let ever_infected = process
        .status()
        .iter()
        .enumerate()
        .filter(|(_, s)| **s != Status::Susceptible)
        .map(|(v, _)| v)
        .collect();
    Ok(SirRun {
        ever_infected,
        tau: process.period(),
    })
}

/// Monte Carlo aggregate over replications.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SirOutcome {
    pub gamma_mean: f64,
    pub gamma_std: f64,
    pub tau_mean: f64,
    pub tau_std: f64,
    pub iterations: usize,
    /// Fraction of replications in which each node was ever infected.
    pub psi: Vec<f64>,
    /// Per-replication `(gamma, tau)`, when requested.
    #[serde(skip)]
    pub trace: Option<Vec<(usize, usize)>>,
}

impl SirOutcome {
    /// `{gamma_mean, gamma_std, tau_mean, tau_std, iterations, psi}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("outcome serializes")
    }

    /// `iter,gamma,tau` rows, 1-based iteration numbers.
    pub fn trace_csv(&self) -> Option<String> {
        self.trace.as_ref().map(|rows| {
            let mut out = String::from("iter,gamma,tau\n");
            for (i, (gamma, tau)) in rows.iter().enumerate() {
                out.push_str(&format!("{},{},{}\n", i + 1, gamma, tau));
            }
            out
        })
    }
}

/// Replications per parallel work item.
const BATCH: usize = 16;

#[derive(Default)]
struct Tally {
    gamma: u128,
    gamma_sq: u128,
    tau: u128,
    tau_sq: u128,
    hits: Vec<u64>,
    trace: Vec<(usize, usize)>,
}

fn mean_std(sum: u128, sum_sq: u128, count: usize) -> (f64, f64) {
    let n = count as f64;
    let mean = sum as f64 / n;
    if count < 2 {
        return (mean, 0.0);
    }
    // Integer sums make the centred sum of squares exact up to one rounding.
    let centred = (sum_sq as f64 * n - (sum as f64) * (sum as f64)) / n;
    (mean, (centred.max(0.0) / (n - 1.0)).sqrt())
}

/// Runs `cfg.iterations` replications; replication `i` draws from stream `i`
/// of `cfg.rng_seed`, so the outcome does not depend on thread scheduling.
pub fn simulate(g: &Graph, seeds: &[usize], cfg: &SirConfig) -> Result<SirOutcome> {
    simulate_with(g, seeds, cfg, false)
}

/// As [`simulate`], optionally keeping the per-replication trace.
pub fn simulate_with(g: &Graph, seeds: &[usize], cfg: &SirConfig, keep_trace: bool) -> Result<SirOutcome> {
    cfg.validate()?;
    if let Some(&s) = seeds.iter().find(|&&s| s >= g.node_count()) {
        return Err(Error::UnknownNode(format!("#{s}")));
    }
    let n = g.node_count();
    let batches = cfg.iterations.div_ceil(BATCH);
    let tallies: Vec<Tally> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut t = Tally {
                hits: vec![0; n],
                ..Default::default()
            };
            for i in b * BATCH..((b + 1) * BATCH).min(cfg.iterations) {
                let mut rng = stream_rng(cfg.rng_seed, i as u64);
                let run = run_sir_once(g, seeds, cfg, &mut rng).expect("validated");
                let gamma = run.ever_infected.len() as u128;
                let tau = run.tau as u128;
                t.gamma += gamma;
                t.gamma_sq += gamma * gamma;
                t.tau += tau;
                t.tau_sq += tau * tau;
                for v in run.ever_infected {
                    t.hits[v] += 1;
                }
                if keep_trace {
                    t.trace.push((gamma as usize, run.tau));
                }
            }
            t
        })
        .collect();
    let mut total = Tally {
        hits: vec![0; n],
        ..Default::default()
    };
    for t in tallies {
        total.gamma += t.gamma;
        total.gamma_sq += t.gamma_sq;
        total.tau += t.tau;
        total.tau_sq += t.tau_sq;
        total.hits.iter_mut().zip(&t.hits).for_each(|(a, b)| *a += b);
        total.trace.extend(t.trace);
    }
    let (gamma_mean, gamma_std) = mean_std(total.gamma, total.gamma_sq, cfg.iterations);
    let (tau_mean, tau_std) = mean_std(total.tau, total.tau_sq, cfg.iterations);
    let iters = cfg.iterations as f64;
    Ok(SirOutcome {
        gamma_mean,
        gamma_std,
        tau_mean,
        tau_std,
        iterations: cfg.iterations,
        psi: total.hits.iter().map(|&h| h as f64 / iters).collect(),
        trace: keep_trace.then_some(total.trace),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    fn cfg(l: usize, alpha: &[f64], kappa: f64) -> SirConfig {
        SirConfig {
            infectious_periods: l,
            alpha: alpha.to_vec(),
            kappa,
            iterations: 50,
            rng_seed: 11,
            mode: TransmissionMode::PerEdge,
        }
    }

    fn chain() -> Graph {
        parse_edge_list("1 2\n2 3\n".as_bytes(), true, true).unwrap().0
    }

    #[test]
    fn probability_zero_kappa() {
        let c = cfg(2, &[0.3, 0.15], 0.0);
        assert_eq!(transmission_probability(&[(1.0, 1), (0.5, 2)], &c), 0.0);
    }

    #[test]
    fn probability_single_contact() {
        for mode in [TransmissionMode::PerEdge, TransmissionMode::SummedClamped] {
            let c = SirConfig {
                mode,
                ..cfg(2, &[0.3, 0.15], 0.5)
            };
            assert!((transmission_probability(&[(1.0, 1)], &c) - 0.15).abs() < 1e-15);
        }
    }

    #[test]
    fn probability_modes_diverge_with_two_contacts() {
        let per_edge = cfg(1, &[0.3], 1.0);
        let summed = SirConfig {
            mode: TransmissionMode::SummedClamped,
            ..per_edge.clone()
        };
        let contacts = [(1.0, 1), (1.0, 1)];
        assert!((transmission_probability(&contacts, &per_edge) - 0.51).abs() < 1e-15);
        assert!((transmission_probability(&contacts, &summed) - 0.6).abs() < 1e-15);
        let clamp = SirConfig {
            alpha: vec![0.8],
            ..summed
        };
        assert_eq!(transmission_probability(&contacts, &clamp), 1.0);
    }

    #[test]
    fn chain_is_deterministic_trace() {
        let g = chain();
        let c = cfg(1, &[1.0], 1.0);
        let run = run_sir_once(&g, &[0], &c, &mut stream_rng(0, 0)).unwrap();
        assert_eq!(run.ever_infected, vec![0, 1, 2]);
        assert_eq!(run.tau, 3);
    }

    #[test]
    fn zero_kappa_lasts_l_periods() {
        let g = chain();
        let c = cfg(3, &[0.3, 0.2, 0.1], 0.0);
        let run = run_sir_once(&g, &[0, 2], &c, &mut stream_rng(0, 0)).unwrap();
        assert_eq!(run.ever_infected, vec![0, 2]);
        assert_eq!(run.tau, 3);
    }

    #[test]
    fn isolated_seed() {
        let g = parse_edge_list("a b\nc c\n".as_bytes(), true, true).unwrap().0;
        let c = cfg(2, &[1.0, 1.0], 1.0);
        let run = run_sir_once(&g, &[2], &c, &mut stream_rng(0, 0)).unwrap();
        assert_eq!(run.ever_infected, vec![2]);
        assert_eq!(run.tau, 2);
    }

    #[test]
    fn new_infections_wait_one_period() {
        // 1 -> 2 -> 3 with L = 2: node 2 is infected in period 1 and may
        // transmit only from period 2 on, so tau = 1 + 1 + 2 = 4.
        let g = chain();
        let c = cfg(2, &[1.0, 0.0], 1.0);
        let run = run_sir_once(&g, &[0], &c, &mut stream_rng(0, 0)).unwrap();
        assert_eq!(run.ever_infected, vec![0, 1, 2]);
        assert_eq!(run.tau, 4);
    }

    #[test]
    fn second_age_uses_second_alpha() {
        // Only the second infectious period transmits.
        let g = chain();
        let c = cfg(2, &[0.0, 1.0], 1.0);
        let run = run_sir_once(&g, &[0], &c, &mut stream_rng(0, 0)).unwrap();
        assert_eq!(run.ever_infected, vec![0, 1, 2]);
        assert_eq!(run.tau, 6);
    }

    #[test]
    fn simulate_aggregates() {
        let g = chain();
        let out = simulate(&g, &[0], &cfg(1, &[1.0], 1.0)).unwrap();
        assert_eq!((out.gamma_mean, out.gamma_std), (3.0, 0.0));
        assert_eq!((out.tau_mean, out.tau_std), (3.0, 0.0));
        assert_eq!(out.psi, vec![1.0; 3]);
        let out = simulate(&g, &[1], &cfg(2, &[0.3, 0.15], 0.0)).unwrap();
        assert_eq!((out.gamma_mean, out.gamma_std), (1.0, 0.0));
        assert_eq!(out.tau_mean, 2.0);
        assert_eq!(out.psi, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn config_validation() {
        assert!(cfg(2, &[0.3], 0.5).validate().is_err());
        assert!(cfg(1, &[1.5], 0.5).validate().is_err());
        assert!(cfg(1, &[0.5], -0.1).validate().is_err());
        assert!(cfg(0, &[], 0.5).validate().is_err());
        let mut c = cfg(1, &[0.5], 0.5);
        c.iterations = 0;
        assert!(c.validate().is_err());
        assert!(simulate(&chain(), &[7], &cfg(1, &[0.5], 0.5)).is_err());
    }

    #[test]
    fn trace_matches_aggregate() {
        let g = parse_edge_list("1 2\n2 3\n3 1\n1 4\n".as_bytes(), false, true)
            .unwrap()
            .0;
        let c = SirConfig {
            iterations: 40,
            ..cfg(2, &[0.6, 0.3], 1.0)
        };
        let out = simulate_with(&g, &[0], &c, true).unwrap();
        let trace = out.trace.clone().unwrap();
        assert_eq!(trace.len(), 40);
        let mean = trace.iter().map(|t| t.0 as f64).sum::<f64>() / 40.0;
        assert!((mean - out.gamma_mean).abs() < 1e-12);
        assert!(out.trace_csv().unwrap().starts_with("iter,gamma,tau\n1,"));
    }
}
