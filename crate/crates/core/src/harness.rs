//! Instance generation and differential cross-validation of the three
//! decision routes.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::automaton::Dfa;
use crate::decide::{decide_graph_on, decide_semigroup, oracle, verify_witness, Instance, PropertyId, Verdict};
use crate::graph::{Analysis, GraphLimits};
use crate::par::{self, Exec};
use crate::semigroup::{transition_semigroup, Opposite, Semigroup, DEFAULT_SEMIGROUP_CAP};

/// Name of the generator behind [`random_dfa`], printed in report headers.
pub const PRNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.3, seed_from_u64; rand 0.8 gen_bool/gen_range)";

/// Seed of the canonical random suite.
pub const CANONICAL_SEED: u64 = 20_030_203;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub states: usize,
    pub letters: usize,
    /// Probability that each `(state, letter)` transition is defined.
    pub completeness: f64,
    pub seed: u64,
    pub count: usize,
}

impl GenSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.states == 0 || self.letters == 0 {
            return Err("states and letters must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.completeness) {
            return Err(format!("completeness {} not in [0, 1]", self.completeness));
        }
        Ok(())
    }
}

/// Reproducible stream of random automata. Each transition is defined with
/// probability `completeness`, with a uniform target.
pub fn random_dfa(spec: &GenSpec) -> impl Iterator<Item = Dfa> {
    spec.validate().expect("invalid generator spec");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let GenSpec { states, letters, completeness, count, .. } = *spec;
    (0..count).map(move |_| {
        Dfa::from_fn(states, letters, |_, _| {
            rng.gen_bool(completeness).then(|| rng.gen_range(0..states))
        })
    })
}

/// Every transition function on `states` states and `letters` letters,
/// once each, in lexicographic order of the `(state, letter)`-indexed
/// target table with "undefined" before state 0.
pub fn enumerate_dfas(states: usize, letters: usize, complete_only: bool) -> impl Iterator<Item = Dfa> {
    assert!(states > 0 && letters > 0);
    let slots = states * letters;
    let base = if complete_only { states } else { states + 1 } as u128;
    let total = base
        .checked_pow(slots as u32)
        .expect("enumeration too large");
    (0..total).map(move |mut code| {
        let mut table = vec![None; slots];
        for slot in table.iter_mut().rev() {
            let digit = (code % base) as usize;
            code /= base;
            *slot = if complete_only {
                Some(digit)
            } else {
                digit.checked_sub(1)
            };
        }
        Dfa::from_fn(states, letters, |p, a| table[p * letters + a])
    })
}

/// All complete automata with 2 states and 2 letters followed by all with
/// 3 states and 2 letters.
pub fn canonical_exhaustive() -> Vec<Dfa> {
    enumerate_dfas(2, 2, true)
        .chain(enumerate_dfas(3, 2, true))
        .collect()
}

/// Configurations of the canonical random suite: 2–6 states, 2–3 letters,
/// completeness 1.0 and 0.8, 250 instances each (5 000 total).
pub fn canonical_random_specs() -> Vec<GenSpec> {
    let mut specs = Vec::new();
    for states in 2..=6 {
        for letters in 2..=3 {
            for completeness in [1.0, 0.8] {
                specs.push(GenSpec {
                    states,
                    letters,
                    completeness,
                    seed: CANONICAL_SEED + specs.len() as u64,
                    count: 250,
                });
            }
        }
    }
    specs
}

pub fn canonical_random() -> Vec<Dfa> {
    canonical_random_specs()
        .iter()
        .flat_map(|spec| random_dfa(spec).collect::<Vec<_>>())
        .collect()
}

#[derive(Clone, Copy, Debug)]
pub struct CrossOptions {
    pub semigroup_cap: usize,
    pub limits: GraphLimits,
    pub exec: Exec,
    /// Record per-instance wall-clock times (makes output run-dependent).
    pub timings: bool,
}

impl Default for CrossOptions {
    fn default() -> Self {
        CrossOptions {
            semigroup_cap: DEFAULT_SEMIGROUP_CAP,
            limits: GraphLimits::default(),
            exec: Exec::default(),
            timings: false,
        }
    }
}

/// Per-route `holds` bits, indexed like [`PropertyId::ALL`].
pub type Bits = [Option<bool>; 3];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub states: usize,
    pub letters: usize,
    pub complete: bool,
    pub graph: Bits,
    pub semigroup: Bits,
    pub oracle: Bits,
    pub semigroup_order: Option<usize>,
    pub skipped: Option<String>,
    pub agree: bool,
    pub witnesses_checked: usize,
    pub witness_failures: Vec<String>,
    pub hierarchy_ok: bool,
    pub duality_ok: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_us: Option<u64>,
}

impl InstanceRecord {
    /// The agreed bit for a property, if any route produced one.
    pub fn holds(&self, property: PropertyId) -> Option<bool> {
        let k = property_slot(property);
        self.graph[k].or(self.semigroup[k]).or(self.oracle[k])
    }
}

/// Full dump of an instance on which routes disagree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disagreement {
    pub index: usize,
    pub dfa: String,
    pub verdicts: Vec<Verdict>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PropertyCounts {
    pub holds: usize,
    pub fails: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub p50_us: u64,
    pub p90_us: u64,
    pub p99_us: u64,
    pub max_us: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub instances: usize,
    pub loc_idem: PropertyCounts,
    pub right_lt: PropertyCounts,
    pub left_lt: PropertyCounts,
    pub disagreements: usize,
    pub skipped: usize,
    pub witnesses_checked: usize,
    pub witness_failures: usize,
    pub hierarchy_violations: usize,
    pub duality_violations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossReport {
    pub prng: String,
    pub records: Vec<InstanceRecord>,
    pub disagreements: Vec<Disagreement>,
    pub summary: Summary,
}

fn property_slot(p: PropertyId) -> usize {
    PropertyId::ALL.iter().position(|&x| x == p).expect("closed enumeration")
}

/// Runs every route on every instance, cross-checks the verdicts and
/// verifies all witnesses. Instances are evaluated under `opts.exec`; the
/// report is ordered by instance index regardless.
pub fn cross_validate(instances: impl IntoIterator<Item = Dfa>, opts: &CrossOptions) -> CrossReport {
    let instances: Vec<Dfa> = instances.into_iter().collect();
    let evaluated = par::map_slice(opts.exec, &instances, |i, d| evaluate_instance(i, d, opts));
    let mut records = Vec::with_capacity(evaluated.len());
    let mut disagreements = Vec::new();
    for (record, dump) in evaluated {
        records.push(record);
        disagreements.extend(dump);
    }
    let summary = summarize(&records, opts.timings);
    CrossReport {
        prng: PRNG_NAME.to_string(),
        records,
        disagreements,
        summary,
    }
}

/// Evaluates one instance; also returns a dump when routes disagree.
pub fn evaluate_instance(index: usize, d: &Dfa, opts: &CrossOptions) -> (InstanceRecord, Option<Disagreement>) {
    let start = Instant::now();
    let mut verdicts: Vec<Verdict> = Vec::new();
    let mut witness_failures = Vec::new();
    let mut witnesses_checked = 0;
    let mut skipped = None;

    let mut check = |instance: Instance<'_>, v: &Verdict, what: &str| {
        if v.holds {
            return;
        }
        witnesses_checked += 1;
        match verify_witness(instance, v) {
            Ok(true) => {}
            Ok(false) => witness_failures.push(format!("{} {} {what}: witness rejected", v.property, v.route)),
            Err(e) => witness_failures.push(format!("{} {} {what}: {e}", v.property, v.route)),
        }
    };

    let mut graph: Bits = [None; 3];
    match Analysis::new(d, opts.limits, Exec::Sequential) {
        Ok(an) => {
            for (k, p) in PropertyId::ALL.into_iter().enumerate() {
                match decide_graph_on(&an, p) {
                    Ok(v) => {
                        check(Instance::Dfa(d), &v, "on automaton");
                        graph[k] = Some(v.holds);
                        verdicts.push(v);
                    }
                    Err(e) => skipped = Some(e.to_string()),
                }
            }
        }
        Err(e) => skipped = Some(e.to_string()),
    }

    let mut semigroup: Bits = [None; 3];
    let mut oracle_bits: Bits = [None; 3];
    let mut semigroup_order = None;
    let mut duality_ok = None;
    match transition_semigroup(d, opts.semigroup_cap) {
        Ok(ts) => {
            semigroup_order = Some(ts.order());
            let mut dual = true;
            for (k, p) in PropertyId::ALL.into_iter().enumerate() {
                let sv = decide_semigroup(&ts, p);
                let ov = oracle(&ts, p);
                for v in [&sv, &ov] {
                    check(Instance::Semigroup(&ts), v, "on semigroup");
                    check(Instance::Dfa(d), v, "on automaton words");
                }
                dual &= decide_semigroup(&Opposite(&ts), p.dual()).holds == sv.holds;
                dual &= oracle(&Opposite(&ts), p.dual()).holds == ov.holds;
                semigroup[k] = Some(sv.holds);
                oracle_bits[k] = Some(ov.holds);
                verdicts.push(sv);
                verdicts.push(ov);
            }
            duality_ok = Some(dual);
        }
        Err(e) => skipped = Some(e.to_string()),
    }

    let agree = (0..3).all(|k| {
        let bits: Vec<bool> = [graph[k], semigroup[k], oracle_bits[k]].into_iter().flatten().collect();
        bits.windows(2).all(|w| w[0] == w[1])
    });
    let hierarchy_ok = [graph, semigroup, oracle_bits].iter().all(|bits| {
        let li = bits[0];
        [bits[1], bits[2]]
            .into_iter()
            .all(|lt| !(lt == Some(true) && li == Some(false)))
    });

    let record = InstanceRecord {
        index,
        states: d.state_count(),
        letters: d.letter_count(),
        complete: d.is_complete(),
        graph,
        semigroup,
        oracle: oracle_bits,
        semigroup_order,
        skipped,
        agree,
        witnesses_checked,
        witness_failures,
        hierarchy_ok,
        duality_ok,
        elapsed_us: opts.timings.then(|| start.elapsed().as_micros() as u64),
    };
    let dump = (!agree).then(|| {
        if !opts.timings {
            for v in &mut verdicts {
                v.stats.elapsed_us = 0;
            }
        }
        Disagreement {
            index,
            dfa: d.to_text(),
            verdicts,
        }
    });
    (record, dump)
}

fn summarize(records: &[InstanceRecord], timings: bool) -> Summary {
    let mut s = Summary {
        instances: records.len(),
        ..Summary::default()
    };
    for r in records {
        for p in PropertyId::ALL {
            let counts = match p {
                PropertyId::LocallyIdempotent => &mut s.loc_idem,
                PropertyId::RightLT => &mut s.right_lt,
                PropertyId::LeftLT => &mut s.left_lt,
            };
            match r.holds(p) {
                Some(true) => counts.holds += 1,
                Some(false) => counts.fails += 1,
                None => {}
            }
        }
        s.disagreements += usize::from(!r.agree);
        s.skipped += usize::from(r.skipped.is_some());
        s.witnesses_checked += r.witnesses_checked;
        s.witness_failures += r.witness_failures.len();
        s.hierarchy_violations += usize::from(!r.hierarchy_ok);
        s.duality_violations += usize::from(r.duality_ok == Some(false));
    }
    if timings {
        let mut times: Vec<u64> = records.iter().filter_map(|r| r.elapsed_us).collect();
        times.sort_unstable();
        if !times.is_empty() {
            let at = |q: f64| times[((times.len() - 1) as f64 * q).round() as usize];
            s.timing = Some(Timing {
                p50_us: at(0.5),
                p90_us: at(0.9),
                p99_us: at(0.99),
                max_us: *times.last().expect("nonempty"),
            });
        }
    }
    s
}

fn bits_text(bits: &Bits) -> String {
    bits.iter()
        .map(|b| match b {
            Some(true) => '1',
            Some(false) => '0',
            None => '-',
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
    Csv,
}

impl CrossReport {
    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Text => self.to_text(),
            ReportFormat::Json => self.to_json_lines(),
            ReportFormat::Csv => self.to_csv(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# loctest cross-validation").unwrap();
        writeln!(out, "# prng: {}", self.prng).unwrap();
        writeln!(out, "# bits per route: loc-idem right-lt left-lt (1 holds, 0 fails, - not run)").unwrap();
        for r in &self.records {
            write!(
                out,
                "instance {}: states={} letters={} order={} graph={} semigroup={} oracle={} agree={} witnesses={}/{}",
                r.index,
                r.states,
                r.letters,
                r.semigroup_order.map_or("-".into(), |k| k.to_string()),
                bits_text(&r.graph),
                bits_text(&r.semigroup),
                bits_text(&r.oracle),
                if r.agree { "yes" } else { "NO" },
                r.witnesses_checked - r.witness_failures.len(),
                r.witnesses_checked,
            )
            .unwrap();
            if let Some(reason) = &r.skipped {
                write!(out, " skipped=\"{reason}\"").unwrap();
            }
            if let Some(us) = r.elapsed_us {
                write!(out, " elapsed_us={us}").unwrap();
            }
            writeln!(out).unwrap();
        }
        for d in &self.disagreements {
            writeln!(out, "DISAGREEMENT instance {}:", d.index).unwrap();
            for line in d.dfa.lines() {
                writeln!(out, "  {line}").unwrap();
            }
            for v in &d.verdicts {
                writeln!(out, "  {}", v.to_json()).unwrap();
            }
        }
        let s = &self.summary;
        writeln!(out, "summary:").unwrap();
        writeln!(out, "  instances: {}", s.instances).unwrap();
        writeln!(out, "  loc-idem: holds={} fails={}", s.loc_idem.holds, s.loc_idem.fails).unwrap();
        writeln!(out, "  right-lt: holds={} fails={}", s.right_lt.holds, s.right_lt.fails).unwrap();
        writeln!(out, "  left-lt: holds={} fails={}", s.left_lt.holds, s.left_lt.fails).unwrap();
        writeln!(out, "  disagreements: {}", s.disagreements).unwrap();
        writeln!(out, "  skipped: {}", s.skipped).unwrap();
        writeln!(out, "  witnesses: {} checked, {} failed", s.witnesses_checked, s.witness_failures).unwrap();
        writeln!(out, "  hierarchy violations: {}", s.hierarchy_violations).unwrap();
        writeln!(out, "  duality violations: {}", s.duality_violations).unwrap();
        if let Some(t) = &s.timing {
            writeln!(
                out,
                "  timing_us: p50={} p90={} p99={} max={}",
                t.p50_us, t.p90_us, t.p99_us, t.max_us
            )
            .unwrap();
        }
        out
    }

    /// One JSON object per line: a header, one record per instance, one
    /// per disagreement, then the summary.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        let header = serde_json::json!({ "header": { "prng": self.prng } });
        writeln!(out, "{header}").unwrap();
        for r in &self.records {
            writeln!(out, "{}", serde_json::json!({ "record": r })).unwrap();
        }
        for d in &self.disagreements {
            writeln!(out, "{}", serde_json::json!({ "disagreement": d })).unwrap();
        }
        writeln!(out, "{}", serde_json::json!({ "summary": self.summary })).unwrap();
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# prng: {}", self.prng).unwrap();
        writeln!(
            out,
            "index,states,letters,complete,order,graph,semigroup,oracle,agree,witnesses_checked,witness_failures,hierarchy_ok,duality_ok,skipped"
        )
        .unwrap();
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.index,
                r.states,
                r.letters,
                r.complete,
                r.semigroup_order.map_or(String::new(), |k| k.to_string()),
                bits_text(&r.graph),
                bits_text(&r.semigroup),
                bits_text(&r.oracle),
                r.agree,
                r.witnesses_checked,
                r.witness_failures.len(),
                r.hierarchy_ok,
                r.duality_ok.map_or(String::new(), |b| b.to_string()),
                r.skipped.as_deref().unwrap_or("").replace(',', ";"),
            )
            .unwrap();
        }
        let s = &self.summary;
        writeln!(
            out,
            "# summary: instances={} disagreements={} skipped={} witness_failures={} hierarchy_violations={} duality_violations={}",
            s.instances, s.disagreements, s.skipped, s.witness_failures, s.hierarchy_violations, s.duality_violations
        )
        .unwrap();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_examples() {
        let spec = GenSpec { states: 1, letters: 1, completeness: 1.0, seed: 7, count: 1 };
        let all: Vec<Dfa> = random_dfa(&spec).collect();
        assert_eq!(all, vec![Dfa::from_letter_maps(1, &[&[0]])]);

        let spec = GenSpec { states: 5, letters: 3, completeness: 0.7, seed: 99, count: 20 };
        assert_eq!(random_dfa(&spec).collect::<Vec<_>>(), random_dfa(&spec).collect::<Vec<_>>());

        let spec = GenSpec { states: 4, letters: 2, completeness: 0.0, seed: 1, count: 3 };
        assert!(random_dfa(&spec).all(|d| d.transition_count() == 0));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_dfas(1, 1, true).count(), 1);
        assert_eq!(enumerate_dfas(2, 1, true).count(), 4);
        assert_eq!(enumerate_dfas(2, 2, true).count(), 16);
        assert_eq!(enumerate_dfas(2, 1, false).count(), 9);
        assert_eq!(enumerate_dfas(3, 2, true).count(), 729);
        let all: Vec<Dfa> = enumerate_dfas(2, 2, false).collect();
        let distinct: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), all.len());
        assert_eq!(all[0].transition_count(), 0);
        assert_eq!(all.iter().filter(|d| d.is_complete()).count(), 16);
    }

    #[test]
    fn canonical_sizes() {
        assert_eq!(canonical_exhaustive().len(), 745);
        assert_eq!(canonical_random_specs().iter().map(|s| s.count).sum::<usize>(), 5000);
    }

    #[test]
    fn two_cycle_and_identity_agree() {
        let report = cross_validate(
            [Dfa::from_letter_maps(2, &[&[1, 0]]), Dfa::from_letter_maps(2, &[&[0, 1]])],
            &CrossOptions::default(),
        );
        assert_eq!(report.summary.disagreements, 0);
        assert_eq!(report.records[0].graph, [Some(false); 3]);
        assert_eq!(report.records[0].oracle, [Some(false); 3]);
        assert_eq!(report.records[1].semigroup, [Some(true); 3]);
        assert_eq!(report.summary.witness_failures, 0);
        assert!(report.summary.witnesses_checked >= 9);
    }

    #[test]
    fn report_is_independent_of_execution_strategy() {
        let spec = GenSpec { states: 4, letters: 2, completeness: 0.9, seed: 5, count: 60 };
        let instances: Vec<Dfa> = random_dfa(&spec).collect();
        let seq = cross_validate(instances.clone(), &CrossOptions { exec: Exec::Sequential, ..Default::default() });
        let par = cross_validate(instances, &CrossOptions { exec: Exec::Parallel, ..Default::default() });
        for f in [ReportFormat::Text, ReportFormat::Json, ReportFormat::Csv] {
            assert_eq!(seq.render(f), par.render(f));
        }
    }

    #[test]
    fn cap_exceeded_is_recorded_as_skip() {
        let d = Dfa::from_letter_maps(3, &[&[1, 2, 0], &[1, 0, 2], &[0, 0, 2]]);
        let report = cross_validate([d], &CrossOptions { semigroup_cap: 5, ..Default::default() });
        assert_eq!(report.summary.skipped, 1);
        assert!(report.records[0].semigroup_order.is_none());
        assert!(report.records[0].graph.iter().all(Option::is_some));
    }
}
