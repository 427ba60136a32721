//! Batch pipeline: every invariant for every knot of an input file, the
//! conjecture flags that follow from them, and jsonl/csv reports.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alexander::wirtinger_alexander;
use crate::algebra::CoefficientField;
use crate::arf::{arf_from_invariants, ROUTE_JONES_COEFFS};
use crate::diagram::{parse_pd, Diagram};
use crate::jones::jones;
use crate::khovanov::{deformed_module_with, extortion_order, khovanov_ranks_with, KhError, KhOptions};

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("line {line}: {message}")]
    Input { line: usize, message: String },
    #[error("report line {line}: {message}")]
    Report { line: usize, message: String },
    #[error("could not build worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Jsonl,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" | "json" => Ok(ReportFormat::Jsonl),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("unknown report format `{other}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub fields: Vec<CoefficientField>,
    pub jobs: usize,
    pub timeout: Option<Duration>,
    pub max_generators: usize,
    pub deformed: bool,
    /// Record wall-clock time per knot; off by default so reports are reproducible byte for byte.
    pub timings: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            fields: CoefficientField::default_set(),
            jobs: 1,
            timeout: None,
            max_generators: KhOptions::default().max_generators,
            deformed: true,
            timings: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformedReport {
    pub free_rank: u64,
    pub torsion_orders: Vec<u32>,
    pub xo: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldReport {
    pub field: String,
    pub reduced: Option<u64>,
    pub reduced_mod4: Option<u64>,
    pub reduced_mod8: Option<u64>,
    pub unreduced: Option<u64>,
    pub unreduced_mod4: Option<u64>,
    pub deformed: Option<DeformedReport>,
    /// Reduced rank is 1 mod 4.
    pub c12_mod4: Option<bool>,
    /// Reduced rank is 1 mod 8.
    pub folk_mod8: Option<bool>,
    /// Unreduced rank is 2 mod 4.
    pub c110_unreduced: Option<bool>,
    /// Reduced rank is 4 Arf + 1 or 4 Arf - 1 mod 8.
    pub arf_q: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotReport {
    pub line: usize,
    pub name: String,
    pub crossings: usize,
    pub det: Option<u64>,
    pub signed_det: Option<i64>,
    pub arf: Option<u8>,
    pub arf_routes: Vec<(String, Option<u8>)>,
    pub arf_consistent: Option<bool>,
    pub fields: Vec<FieldReport>,
    /// Unreduced rank over F2 is twice the reduced rank.
    pub f2_doubling: Option<bool>,
    /// Signed determinant is 4 Arf + 1 mod 8, with Arf from the Jones side.
    pub levine_consistency: Option<bool>,
    /// Computations skipped as not applicable, e.g. reduced homology of a link.
    pub notes: Vec<String>,
    /// Computations stopped by the time or generator budget.
    pub aborted: Vec<String>,
    pub timing_ms: Option<u64>,
}

impl KnotReport {
    pub fn is_aborted(&self) -> bool {
        !self.aborted.is_empty()
    }

    pub fn field(&self, f: CoefficientField) -> Option<&FieldReport> {
        self.fields.iter().find(|r| r.field == f.tag())
    }

    /// Recompute residues and flags from the numeric fields.
    pub fn derive_flags(&mut self) {
        for f in &mut self.fields {
            f.reduced_mod4 = f.reduced.map(|r| r % 4);
            f.reduced_mod8 = f.reduced.map(|r| r % 8);
            f.unreduced_mod4 = f.unreduced.map(|r| r % 4);
            f.c12_mod4 = f.reduced.map(|r| r % 4 == 1);
            f.folk_mod8 = f.reduced.map(|r| r % 8 == 1);
            f.c110_unreduced = f.unreduced.map(|r| r % 4 == 2);
            f.arf_q = match (f.reduced, self.arf) {
                (Some(r), Some(a)) => {
                    let centre = 4 * a as u64;
                    Some(r % 8 == (centre + 1) % 8 || r % 8 == (centre + 7) % 8)
                }
                _ => None,
            };
        }
        self.f2_doubling = self.field(CoefficientField::Prime(2)).and_then(|f| match (f.reduced, f.unreduced) {
            (Some(r), Some(u)) => Some(u == 2 * r),
            _ => None,
        });
        let jones_arf = self.arf_routes.iter().find(|(n, _)| n == ROUTE_JONES_COEFFS).and_then(|(_, v)| *v);
        self.levine_consistency = match (self.signed_det, jones_arf) {
            (Some(s), Some(a)) => Some(s.rem_euclid(8) == 4 * a as i64 + 1),
            _ => None,
        };
    }
}

/// Records of an input file with their line numbers.
pub fn read_input(text: &str) -> Result<Vec<(usize, Diagram)>, ScanError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (name, code) = line
            .split_once('\t')
            .ok_or_else(|| ScanError::Input { line: i + 1, message: "expected `name<TAB>pd_code`".into() })?;
        let d = parse_pd(code).map_err(|e| ScanError::Input { line: i + 1, message: e.to_string() })?;
        out.push((i + 1, d.with_name(name.trim())));
    }
    Ok(out)
}

fn kh_message(field: CoefficientField, what: &str, e: &KhError) -> String {
    format!("{} {what}: {e}", field.tag())
}

fn is_budget(e: &KhError) -> bool {
    matches!(e, KhError::Deadline | KhError::ResourceLimit { .. })
}

/// All invariants of one knot.
pub fn analyze(line: usize, d: &Diagram, opts: &ScanOptions) -> KnotReport {
    let start = Instant::now();
    let kh_opts = KhOptions {
        max_generators: opts.max_generators,
        deadline: opts.timeout.map(|t| start + t),
        ..KhOptions::default()
    };
    let mut r = KnotReport {
        line,
        name: d.name().unwrap_or("").to_string(),
        crossings: d.crossing_count(),
        det: None,
        signed_det: None,
        arf: None,
        arf_routes: Vec::new(),
        arf_consistent: None,
        fields: Vec::new(),
        f2_doubling: None,
        levine_consistency: None,
        notes: Vec::new(),
        aborted: Vec::new(),
        timing_ms: None,
    };
    let v = jones(d);
    if d.is_knot() {
        match wirtinger_alexander(d) {
            Ok(alex) => {
                let sdet = alex.signed_det();
                r.signed_det = Some(sdet);
                r.det = Some(sdet.unsigned_abs());
                match arf_from_invariants(&alex, &v) {
                    Ok(a) => {
                        r.arf = Some(a.value);
                        r.arf_consistent = Some(a.consistent);
                        r.arf_routes = a.routes;
                    }
                    Err(e) => r.notes.push(format!("arf: {e}")),
                }
            }
            Err(e) => r.notes.push(format!("alexander: {e}")),
        }
    } else {
        let (re, im) = v.at_minus_one();
        r.det = Some(((re as f64).hypot(im as f64)).round() as u64);
        r.notes.push(format!("{} components: reduced and deformed homology skipped", d.components()));
    }
    for &field in &opts.fields {
        let mut f = FieldReport {
            field: field.tag(),
            reduced: None,
            reduced_mod4: None,
            reduced_mod8: None,
            unreduced: None,
            unreduced_mod4: None,
            deformed: None,
            c12_mod4: None,
            folk_mod8: None,
            c110_unreduced: None,
            arf_q: None,
        };
        let record = |what: &str, e: KhError, r: &mut KnotReport| {
            if is_budget(&e) {
                r.aborted.push(kh_message(field, what, &e));
            } else {
                r.notes.push(kh_message(field, what, &e));
            }
        };
        if d.is_knot() {
            match khovanov_ranks_with(d, field, true, &kh_opts) {
                Ok(t) => f.reduced = Some(t.total()),
                Err(e) => record("reduced", e, &mut r),
            }
        }
        match khovanov_ranks_with(d, field, false, &kh_opts) {
            Ok(t) => f.unreduced = Some(t.total()),
            Err(e) => record("unreduced", e, &mut r),
        }
        if opts.deformed && d.is_knot() && field.characteristic() != 2 {
            match deformed_module_with(d, field, true, &kh_opts) {
                Ok(m) => {
                    f.deformed = Some(DeformedReport {
                        free_rank: m.free_rank,
                        torsion_orders: m.torsion_orders(),
                        xo: extortion_order(&m),
                    })
                }
                Err(e) => record("deformed", e, &mut r),
            }
        }
        r.fields.push(f);
    }
    r.derive_flags();
    if opts.timings {
        r.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    r
}

/// Analyse every knot on a pool of `opts.jobs` workers; output is in input order.
pub fn scan(input: &[(usize, Diagram)], opts: &ScanOptions) -> Result<Vec<KnotReport>, ScanError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| ScanError::Pool(e.to_string()))?;
    let mut out: Vec<KnotReport> = pool.install(|| input.par_iter().map(|(line, d)| analyze(*line, d, opts)).collect());
    out.sort_by_key(|r| r.line);
    Ok(out)
}

pub fn scan_text(text: &str, opts: &ScanOptions) -> Result<Vec<KnotReport>, ScanError> {
    scan(&read_input(text)?, opts)
}

/// Per-field counts of flags that came out false.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub knots: usize,
    pub aborted: usize,
    pub violations: BTreeMap<String, BTreeMap<String, usize>>,
}

pub const FLAG_C12: &str = "C1.2-mod4";
pub const FLAG_FOLK8: &str = "Folk-mod8";
pub const FLAG_C110: &str = "C1.10-unreduced";
pub const FLAG_ARFQ: &str = "ArfQ";
pub const FLAG_F2_DOUBLING: &str = "F2-doubling";
pub const FLAG_LEVINE: &str = "Levine-consistency";

impl Summary {
    pub fn count(&self, flag: &str, field: &str) -> usize {
        self.violations.get(flag).and_then(|m| m.get(field)).copied().unwrap_or(0)
    }
}

pub fn summarize(rs: &[KnotReport]) -> Summary {
    let mut s = Summary { knots: rs.len(), aborted: rs.iter().filter(|r| r.is_aborted()).count(), ..Summary::default() };
    for flag in [FLAG_C12, FLAG_FOLK8, FLAG_C110, FLAG_ARFQ, FLAG_F2_DOUBLING, FLAG_LEVINE] {
        s.violations.insert(flag.to_string(), BTreeMap::new());
    }
    let mut bump = |flag: &str, field: &str, v: Option<bool>| {
        if v == Some(false) {
            *s.violations.get_mut(flag).unwrap().entry(field.to_string()).or_insert(0) += 1;
        }
    };
    for r in rs {
        for f in &r.fields {
            bump(FLAG_C12, &f.field, f.c12_mod4);
            bump(FLAG_FOLK8, &f.field, f.folk_mod8);
            bump(FLAG_C110, &f.field, f.c110_unreduced);
            bump(FLAG_ARFQ, &f.field, f.arf_q);
        }
        bump(FLAG_F2_DOUBLING, "f2", r.f2_doubling);
        bump(FLAG_LEVINE, "all", r.levine_consistency);
    }
    s
}

const SUMMARY_KEY: &str = "summary";

pub fn report(rs: &[KnotReport], format: ReportFormat) -> String {
    let summary = summarize(rs);
    match format {
        ReportFormat::Jsonl => {
            let mut s = String::new();
            for r in rs {
                s.push_str(&serde_json::to_string(r).expect("report serializes"));
                s.push('\n');
            }
            let footer = serde_json::json!({ SUMMARY_KEY: summary });
            s.push_str(&footer.to_string());
            s.push('\n');
            s
        }
        ReportFormat::Csv => csv_report(rs, &summary),
    }
}

const CSV_FIXED: [&str; 14] = [
    "line",
    "name",
    "crossings",
    "det",
    "signed_det",
    "arf",
    "arf_routes",
    "arf_consistent",
    "f2_doubling",
    "levine_consistency",
    "notes",
    "aborted",
    "timing_ms",
    "fields",
];
const CSV_PER_FIELD: [&str; 11] =
    ["reduced", "reduced_mod4", "reduced_mod8", "unreduced", "unreduced_mod4", "free_rank", "torsion_orders", "xo", "c12", "folk8", "c110"];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn field_tags(rs: &[KnotReport]) -> Vec<String> {
    let mut tags: Vec<String> = Vec::new();
    for r in rs {
        for f in &r.fields {
            if !tags.contains(&f.field) {
                tags.push(f.field.clone());
            }
        }
    }
    tags
}

fn csv_report(rs: &[KnotReport], summary: &Summary) -> String {
    let tags = field_tags(rs);
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let mut header: Vec<String> = CSV_FIXED.iter().map(|s| s.to_string()).collect();
    for t in &tags {
        header.extend(CSV_PER_FIELD.iter().map(|c| format!("{t}_{c}")));
        header.push(format!("{t}_arfq"));
    }
    w.write_record(&header).expect("in-memory write");
    for r in rs {
        let routes = r
            .arf_routes
            .iter()
            .map(|(n, v)| format!("{n}={}", v.map_or("err".to_string(), |x| x.to_string())))
            .collect::<Vec<_>>()
            .join(";");
        let mut row = vec![
            r.line.to_string(),
            r.name.clone(),
            r.crossings.to_string(),
            opt(&r.det),
            opt(&r.signed_det),
            opt(&r.arf),
            routes,
            opt(&r.arf_consistent),
            opt(&r.f2_doubling),
            opt(&r.levine_consistency),
            r.notes.join(";"),
            r.aborted.join(";"),
            opt(&r.timing_ms),
            r.fields.iter().map(|f| f.field.as_str()).collect::<Vec<_>>().join(";"),
        ];
        for t in &tags {
            match r.fields.iter().find(|f| &f.field == t) {
                Some(f) => {
                    let d = f.deformed.as_ref();
                    row.extend([
                        opt(&f.reduced),
                        opt(&f.reduced_mod4),
                        opt(&f.reduced_mod8),
                        opt(&f.unreduced),
                        opt(&f.unreduced_mod4),
                        opt(&d.map(|d| d.free_rank)),
                        d.map(|d| d.torsion_orders.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(";"))
                            .unwrap_or_default(),
                        opt(&d.map(|d| d.xo)),
                        opt(&f.c12_mod4),
                        opt(&f.folk_mod8),
                        opt(&f.c110_unreduced),
                        opt(&f.arf_q),
                    ]);
                }
                None => row.extend(std::iter::repeat_n(String::new(), CSV_PER_FIELD.len() + 1)),
            }
        }
        w.write_record(&row).expect("in-memory write");
    }
    let mut s = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8");
    s.push_str(&format!("# {SUMMARY_KEY} knots={} aborted={}\n", summary.knots, summary.aborted));
    for (flag, by_field) in &summary.violations {
        let parts: Vec<String> = by_field.iter().map(|(f, n)| format!("{f}={n}")).collect();
        s.push_str(&format!("# {SUMMARY_KEY} {flag} {}\n", parts.join(" ")));
    }
    s
}

/// Read reports back; the summary footer is skipped.
pub fn parse_report(text: &str, format: ReportFormat) -> Result<Vec<KnotReport>, ScanError> {
    match format {
        ReportFormat::Jsonl => {
            let mut out = Vec::new();
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let v: serde_json::Value =
                    serde_json::from_str(line).map_err(|e| ScanError::Report { line: i + 1, message: e.to_string() })?;
                if v.get(SUMMARY_KEY).is_some() {
                    continue;
                }
                out.push(serde_json::from_value(v).map_err(|e| ScanError::Report { line: i + 1, message: e.to_string() })?);
            }
            Ok(out)
        }
        ReportFormat::Csv => parse_csv(text),
    }
}

fn parse_csv(text: &str) -> Result<Vec<KnotReport>, ScanError> {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let err = |line: usize, message: String| ScanError::Report { line, message };
    let header: Vec<String> = rd.headers().map_err(|e| err(1, e.to_string()))?.iter().map(str::to_string).collect();
    let col = |name: &str| header.iter().position(|h| h == name);
    let mut out = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| err(line, e.to_string()))?;
        let get = |name: &str| col(name).and_then(|c| rec.get(c)).unwrap_or("");
        fn num<T: std::str::FromStr>(s: &str, line: usize) -> Result<Option<T>, ScanError> {
            if s.is_empty() {
                return Ok(None);
            }
            s.parse().map(Some).map_err(|_| ScanError::Report { line, message: format!("bad number `{s}`") })
        }
        let list = |s: &str| -> Vec<String> {
            if s.is_empty() {
                Vec::new()
            } else {
                s.split(';').map(str::to_string).collect()
            }
        };
        let mut arf_routes = Vec::new();
        for part in list(get("arf_routes")) {
            let (n, v) = part.split_once('=').ok_or_else(|| err(line, format!("bad route `{part}`")))?;
            arf_routes.push((n.to_string(), if v == "err" { None } else { num(v, line)? }));
        }
        let mut fields = Vec::new();
        for tag in list(get("fields")) {
            let g = |c: &str| get(&format!("{tag}_{c}")).to_string();
            let free: Option<u64> = num(&g("free_rank"), line)?;
            let deformed = match free {
                Some(free_rank) => Some(DeformedReport {
                    free_rank,
                    torsion_orders: list(&g("torsion_orders"))
                        .iter()
                        .map(|o| num(o, line).map(|v| v.unwrap_or(0)))
                        .collect::<Result<_, _>>()?,
                    xo: num(&g("xo"), line)?.unwrap_or(0),
                }),
                None => None,
            };
            fields.push(FieldReport {
                reduced: num(&g("reduced"), line)?,
                reduced_mod4: num(&g("reduced_mod4"), line)?,
                reduced_mod8: num(&g("reduced_mod8"), line)?,
                unreduced: num(&g("unreduced"), line)?,
                unreduced_mod4: num(&g("unreduced_mod4"), line)?,
                deformed,
                c12_mod4: num(&g("c12"), line)?,
                folk_mod8: num(&g("folk8"), line)?,
                c110_unreduced: num(&g("c110"), line)?,
                arf_q: num(&g("arfq"), line)?,
                field: tag,
            });
        }
        out.push(KnotReport {
            line: num(get("line"), line)?.unwrap_or(0),
            name: get("name").to_string(),
            crossings: num(get("crossings"), line)?.unwrap_or(0),
            det: num(get("det"), line)?,
            signed_det: num(get("signed_det"), line)?,
            arf: num(get("arf"), line)?,
            arf_routes,
            arf_consistent: num(get("arf_consistent"), line)?,
            fields,
            f2_doubling: num(get("f2_doubling"), line)?,
            levine_consistency: num(get("levine_consistency"), line)?,
            notes: list(get("notes")),
            aborted: list(get("aborted")),
            timing_ms: num(get("timing_ms"), line)?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> ScanOptions {
        ScanOptions { jobs: 2, ..ScanOptions::default() }
    }

    #[test]
    fn unknot_flags_hold() {
        let rs = scan_text("unknot\tU\n", &opts()).unwrap();
        let r = &rs[0];
        for f in &r.fields {
            assert_eq!(f.reduced, Some(1));
            assert_eq!(f.unreduced, Some(2));
            for flag in [f.c12_mod4, f.folk_mod8, f.c110_unreduced, f.arf_q] {
                assert_eq!(flag, Some(true));
            }
        }
        assert_eq!(r.f2_doubling, Some(true));
        assert_eq!(r.levine_consistency, Some(true));
    }

    #[test]
    fn stevedore_breaks_mod4() {
        let rs = scan_text("6_2\t[[1,4,2,5],[5,10,6,11],[3,9,4,8],[9,3,10,2],[7,12,8,1],[11,6,12,7]]\n", &opts()).unwrap();
        for f in &rs[0].fields {
            assert_eq!(f.reduced, Some(11));
            assert_eq!(f.c12_mod4, Some(false));
        }
        assert_eq!(rs[0].levine_consistency, Some(true));
    }

    #[test]
    fn empty_input_gives_summary_only() {
        let text = report(&[], ReportFormat::Jsonl);
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("{\"summary\""));
        let csv = report(&[], ReportFormat::Csv);
        assert!(parse_report(&csv, ReportFormat::Csv).unwrap().is_empty());
    }

    #[test]
    fn links_are_noted_not_aborted() {
        let rs = scan_text("hopf\t[[4,1,3,2],[2,3,1,4]]\n", &opts()).unwrap();
        assert!(!rs[0].is_aborted());
        assert_eq!(rs[0].det, Some(2));
        assert!(rs[0].fields.iter().all(|f| f.reduced.is_none() && f.unreduced.is_some()));
    }

    #[test]
    fn budget_aborts_are_recorded() {
        let o = ScanOptions { max_generators: 4, ..opts() };
        let rs = scan_text("5_1\t[[1,6,2,7],[3,8,4,9],[5,10,6,1],[7,2,8,3],[9,4,10,5]]\n", &o).unwrap();
        assert!(rs[0].is_aborted());
        assert_eq!(summarize(&rs).aborted, 1);
    }
}
