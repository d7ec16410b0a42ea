//! Report rows, CSV output and the pass/fail verdict.

use std::io::Write;
use std::path::Path;

/// Expected behavior of a residual sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tag {
    /// Every value at or below the machine-zero threshold.
    MachineZero,
    /// Values shrink with ratio >= 1.3 per successive row.
    Decreasing,
    /// The final value stays at least 10x above the machine-zero threshold.
    BoundedAway,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::MachineZero => "machine-zero",
            Tag::Decreasing => "decreasing",
            Tag::BoundedAway => "bounded-away",
        }
    }
}

pub const MACHINE_ZERO: f64 = 1e-10;
pub const DECREASE_RATIO: f64 = 1.3;
pub const BOUNDED_AWAY: f64 = 10.0 * MACHINE_ZERO;

/// One measured residual.
#[derive(Debug, Clone)]
pub struct ReportRow {
    pub scenario: &'static str,
    pub n: usize,
    pub orders: String,
    pub residual: String,
    pub value: f64,
    pub tag: Tag,
}

impl ReportRow {
    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{:e},{}",
            self.scenario,
            self.n,
            self.orders,
            self.residual,
            self.value,
            self.tag.as_str()
        )
    }
}

/// Render the report: '#' metadata lines, the fixed header, one line per
/// row in production order. Deterministic byte-for-byte for a fixed row
/// sequence.
pub fn render_report(rows: &[ReportRow], metadata: &[String]) -> String {
    let mut out = String::new();
    for line in metadata {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str("scenario,n,orders,residual,value,tag\n");
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}

pub fn write_report(rows: &[ReportRow], metadata: &[String], path: &Path) -> std::io::Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(render_report(rows, metadata).as_bytes())
}

/// Outcome of applying the per-tag thresholds.
#[derive(Debug)]
pub struct Verdict {
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Group rows by (scenario, residual, orders) preserving order, then apply
/// the per-tag rules: machine-zero rows must each sit at or below 1e-10;
/// decreasing groups must shrink with successive ratio >= 1.3; bounded-away
/// groups must end at or above 1e-9.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn verdict(rows: &[ReportRow]) -> Verdict {
    let mut groups: Vec<(String, Vec<&ReportRow>)> = Vec::new();
    for row in rows {
        let key = format!("{}:{}:{}", row.scenario, row.residual, row.orders);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, list)) => list.push(row),
            None => groups.push((key, vec![row])),
        }
    }
    let mut failures = Vec::new();
    for (key, list) in &groups {
        let tag = list[0].tag;
        if list.iter().any(|r| r.tag != tag) {
            failures.push(format!("{key}: inconsistent tags within group"));
            continue;
        }
        match tag {
            Tag::MachineZero => {
                for r in list {
                    if !(r.value <= MACHINE_ZERO) {
                        failures.push(format!(
                            "{key}: n={} value {:e} above machine-zero threshold {MACHINE_ZERO:e}",
                            r.n, r.value
                        ));
                    }
                }
            }
            Tag::Decreasing => {
                if list.len() < 2 {
                    failures.push(format!("{key}: needs at least two levels to check decrease"));
                }
                for pair in list.windows(2) {
                    let ratio = pair[0].value / pair[1].value;
                    if !(ratio >= DECREASE_RATIO) {
                        failures.push(format!(
                            "{key}: ratio {ratio:.3} from n={} to n={} below {DECREASE_RATIO}",
                            pair[0].n, pair[1].n
                        ));
                    }
                }
            }
            Tag::BoundedAway => {
                let last = list.last().expect("group is non-empty");
                if !(last.value >= BOUNDED_AWAY) {
                    failures.push(format!(
                        "{key}: final value {:e} below bounded-away threshold {BOUNDED_AWAY:e}",
                        last.value
                    ));
                }
            }
        }
    }
    Verdict {
        pass: failures.is_empty(),
        failures,
    }
}
