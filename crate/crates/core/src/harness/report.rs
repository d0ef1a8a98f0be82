//! Aggregate tables over run records.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::algorithms::AlgorithmId;
use crate::error::Error;
use crate::search::RunRecord;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub algorithm: String,
    pub advisor: String,
    pub budget: Option<u64>,
    pub runs: usize,
    pub pr: f64,
    pub avg_ss: f64,
    pub avg_llm: f64,
    pub avg_ext: f64,
    /// Percent fewer steps than the baseline row.
    pub reduction: Option<f64>,
    pub letter_pr: Option<f64>,
    pub word_pr: Option<f64>,
    pub game_pr: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelRow {
    pub algorithm: String,
    pub advisor: String,
    pub budget: Option<u64>,
    pub level: u32,
    pub runs: usize,
    pub pr: f64,
    pub avg_ss: f64,
}

type Group = (String, String, Option<u64>);

fn group_of(r: &RunRecord) -> Group {
    (r.algorithm_id.clone(), r.advisor_id.clone(), r.budget)
}

/// Position of a label's algorithm in the canonical listing; unknown labels sort last.
fn algorithm_rank(label: &str) -> usize {
    let id = label.split(':').next().unwrap_or(label);
    AlgorithmId::ALL.iter().position(|a| a.as_str() == id).unwrap_or(AlgorithmId::ALL.len())
}

/// Groups ordered by budget, algorithm, label, then advisor.
fn groups<'a>(records: &'a [RunRecord], key: impl Fn(&RunRecord) -> Group) -> Vec<(Group, Vec<&'a RunRecord>)> {
    let mut out: Vec<(Group, Vec<&RunRecord>)> = Vec::new();
    for r in records {
        let k = key(r);
        match out.iter_mut().find(|(g, _)| *g == k) {
            Some((_, v)) => v.push(r),
            None => out.push((k, vec![r])),
        }
    }
    out.sort_by(|((a1, v1, b1), _), ((a2, v2, b2), _)| {
        (b1, algorithm_rank(a1), a1, v1).cmp(&(b2, algorithm_rank(a2), a2, v2))
    });
    out
}

fn mean(v: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn pr(recs: &[&RunRecord]) -> f64 {
    100.0 * mean(recs.iter().map(|r| f64::from(u8::from(r.solved))))
}

fn metric(recs: &[&RunRecord], name: &str) -> Option<f64> {
    recs.iter()
        .any(|r| r.metrics.contains_key(name))
        .then(|| 100.0 * mean(recs.iter().map(|r| r.metrics.get(name).copied().unwrap_or(0.0))))
}

pub fn reduction(avg_ss: f64, baseline_ss: f64) -> Option<f64> {
    (baseline_ss > 0.0).then(|| (1.0 - avg_ss / baseline_ss) * 100.0)
}

/// One row per (algorithm, advisor, budget). Reductions compare with the `baseline` algorithm at
/// the same budget, else at any budget.
pub fn summarize(records: &[RunRecord], baseline: &str) -> Vec<ReportRow> {
    let mut rows: Vec<ReportRow> = groups(records, group_of)
        .into_iter()
        .map(|((algorithm, advisor, budget), recs)| ReportRow {
            algorithm,
            advisor,
            budget,
            runs: recs.len(),
            pr: pr(&recs),
            avg_ss: mean(recs.iter().map(|r| r.total_ss as f64)),
            avg_llm: mean(recs.iter().map(|r| r.stats.llm_calls() as f64)),
            avg_ext: mean(recs.iter().map(|r| r.stats.ext_calls() as f64)),
            reduction: None,
            letter_pr: metric(&recs, "letter_pr"),
            word_pr: metric(&recs, "word_pr"),
            game_pr: metric(&recs, "game_pr"),
        })
        .collect();
    let base: Vec<(Option<u64>, f64)> =
        rows.iter().filter(|r| r.algorithm == baseline).map(|r| (r.budget, r.avg_ss)).collect();
    for row in &mut rows {
        let b = base.iter().find(|(b, _)| *b == row.budget).or(base.first());
        row.reduction = b.and_then(|(_, ss)| reduction(row.avg_ss, *ss));
    }
    rows
}

pub fn level_rows(records: &[RunRecord]) -> Vec<LevelRow> {
    let mut out = Vec::new();
    for ((algorithm, advisor, budget), recs) in groups(records, group_of) {
        let levels: BTreeSet<u32> = recs.iter().filter_map(|r| r.difficulty).collect();
        for level in levels {
            let at: Vec<&RunRecord> = recs.iter().copied().filter(|r| r.difficulty == Some(level)).collect();
            out.push(LevelRow {
                algorithm: algorithm.clone(),
                advisor: advisor.clone(),
                budget,
                level,
                runs: at.len(),
                pr: pr(&at),
                avg_ss: mean(at.iter().map(|r| r.total_ss as f64)),
            });
        }
    }
    out
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or("-".into(), |x| format!("{x:.1}"))
}

fn fmt_budget(b: Option<u64>) -> String {
    b.map_or("-".into(), |x| x.to_string())
}

pub fn render_text(rows: &[ReportRow], levels: &[LevelRow], baseline: &str) -> String {
    let crosswords = rows.iter().any(|r| r.letter_pr.is_some());
    let mut s = String::new();
    let _ = write!(
        s,
        "{:<32} {:<36} {:>6} {:>5} {:>6} {:>9} {:>9} {:>9} {:>10}",
        "algorithm", "advisor", "budget", "runs", "PR%", "avg SS", "avg LLM", "avg ext", format!("vs {baseline}")
    );
    if crosswords {
        let _ = write!(s, " {:>8} {:>8} {:>8}", "letter%", "word%", "game%");
    }
    s.push('\n');
    for r in rows {
        let _ = write!(
            s,
            "{:<32} {:<36} {:>6} {:>5} {:>6.1} {:>9.1} {:>9.1} {:>9.1} {:>10}",
            r.algorithm,
            r.advisor,
            fmt_budget(r.budget),
            r.runs,
            r.pr,
            r.avg_ss,
            r.avg_llm,
            r.avg_ext,
            r.reduction.map_or("-".into(), |x| format!("{x:.1}%")),
        );
        if crosswords {
            let _ = write!(s, " {:>8} {:>8} {:>8}", fmt_opt(r.letter_pr), fmt_opt(r.word_pr), fmt_opt(r.game_pr));
        }
        s.push('\n');
    }
    if !levels.is_empty() {
        s.push_str("\nby difficulty level (rank terciles unless level cuts were configured; min_steps for blocksworld)\n");
        let _ = writeln!(s, "{:<32} {:<36} {:>6} {:>5} {:>5} {:>6} {:>9}", "algorithm", "advisor", "budget", "level", "runs", "PR%", "avg SS");
        for l in levels {
            let _ = writeln!(
                s,
                "{:<32} {:<36} {:>6} {:>5} {:>5} {:>6.1} {:>9.1}",
                l.algorithm,
                l.advisor,
                fmt_budget(l.budget),
                l.level,
                l.runs,
                l.pr,
                l.avg_ss
            );
        }
    }
    s
}

pub fn write_csv<T: Serialize>(rows: &[T], out: impl std::io::Write) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Config(format!("csv: {e}")))?;
    }
    w.flush().map_err(|e| Error::Config(format!("csv: {e}")))
}

/// Pass rate per budget for each (algorithm, advisor).
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub budgets: Vec<u64>,
    pub rows: Vec<(String, String, Vec<Option<f64>>)>,
}

pub fn sweep_table(records: &[RunRecord]) -> SweepTable {
    let budgets: Vec<u64> = records.iter().filter_map(|r| r.budget).collect::<BTreeSet<_>>().into_iter().collect();
    let mut rows = Vec::new();
    for ((algorithm, advisor, _), recs) in groups(records, |r| (r.algorithm_id.clone(), r.advisor_id.clone(), None)) {
        let cells = budgets
            .iter()
            .map(|b| {
                let at: Vec<&RunRecord> = recs.iter().copied().filter(|r| r.budget == Some(*b)).collect();
                (!at.is_empty()).then(|| pr(&at))
            })
            .collect();
        rows.push((algorithm, advisor, cells));
    }
    SweepTable { budgets, rows }
}

impl SweepTable {
    pub fn render_text(&self) -> String {
        let mut s = format!("{:<32} {:<36}", "algorithm", "advisor");
        for b in &self.budgets {
            let _ = write!(s, " {:>7}", format!("SS={b}"));
        }
        s.push('\n');
        for (a, v, cells) in &self.rows {
            let _ = write!(s, "{a:<32} {v:<36}");
            for c in cells {
                let _ = write!(s, " {:>7}", fmt_opt(*c));
            }
            s.push('\n');
        }
        s
    }

    pub fn write_csv(&self, out: impl std::io::Write) -> Result<(), Error> {
        let mut w = csv::Writer::from_writer(out);
        let mut head = vec!["algorithm".to_string(), "advisor".to_string()];
        head.extend(self.budgets.iter().map(|b| b.to_string()));
        let err = |e: csv::Error| Error::Config(format!("csv: {e}"));
        w.write_record(&head).map_err(err)?;
        for (a, v, cells) in &self.rows {
            let mut rec = vec![a.clone(), v.clone()];
            rec.extend(cells.iter().map(|c| c.map_or(String::new(), |x| format!("{x:.1}"))));
            w.write_record(&rec).map_err(err)?;
        }
        w.flush().map_err(|e| Error::Config(format!("csv: {e}")))
    }
}
