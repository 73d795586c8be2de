//! Command-line surface: invariant reports, ideal-expression evaluation,
//! genus-tree sweeps, census cross-checks, and the plane pipeline.
//!
//! Exit codes: 0 success / no violations, 1 a violation or internal
//! consistency failure was found (and serialized), 2 usage or input error.
//! Machine output is one canonical JSON document; serde_json maps are
//! BTree-backed here, so key order is sorted and reports are byte-stable.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use nsg_core::bounds::{ag_key_verdict, CHECK_IDS, VERDICT_CSV_HEADER};
use nsg_core::{
    ag_bookkeeping, brute_force_census, check_all, coefficient, enumerate_by_genus,
    equality_analysis, from_parametrization, sweep, BranchSeries, CensusError, CensusSummary,
    ClassFilter, EqualityAnalysis, GenusRow, GoodSemigroupPlane, InequalityVerdict,
    InvariantReport, NumericalSemigroup, PlaneError, PlaneInvariantReport, RelativeIdeal,
    SweepConfig,
};

const SCHEMA_VERSION: u64 = 1;

#[derive(Parser)]
#[command(name = "nsg", version, about = "numerical semigroup toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Invariants, classification flags, and bound verdicts for one semigroup.
    Info {
        /// Minimal or redundant generators; gcd must be 1.
        #[arg(required = true)]
        gens: Vec<u64>,
        /// Canonical JSON report instead of the table.
        #[arg(long)]
        json: bool,
        /// Verdict rows as CSV.
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Evaluate an ideal expression over a semigroup and print its window.
    Ideal {
        #[arg(required = true)]
        gens: Vec<u64>,
        /// Expression over omega, M, C, S and gens:z1,z2,... combined with
        /// + (sum), & (intersection), - (difference) and parentheses.
        #[arg(long)]
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Sweep the genus tree checking every bound; exit 1 on any violation.
    Verify {
        #[arg(long)]
        max_genus: u64,
        /// all, almost-symmetric, or positioned.
        #[arg(long, default_value = "all")]
        filter: String,
        /// Comma-separated check ids to collect (default: all known).
        #[arg(long)]
        check: Option<String>,
        #[arg(long)]
        json: bool,
        /// Violation rows as CSV.
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        /// Worker threads; 0 picks the library default.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Frontier genus at which subtrees are handed to workers.
        #[arg(long, default_value_t = 12)]
        split_genus: u64,
        /// Abort once this many nodes were visited.
        #[arg(long)]
        budget: Option<u64>,
        /// Node-rate reporting on standard error.
        #[arg(long)]
        progress: bool,
    },
    /// Count genus-tree nodes per genus, with per-class tallies.
    Enumerate {
        #[arg(long)]
        max_genus: u64,
        /// Totals only.
        #[arg(long)]
        count: bool,
        #[arg(long)]
        json: bool,
        /// Per-genus rows as CSV.
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Brute-force census from gap sets, independent of the tree.
    Oracle {
        #[arg(long)]
        max_genus: u64,
        #[arg(long)]
        json: bool,
    },
    /// Good semigroups of N^2 (two-branch value semigroups).
    #[command(subcommand)]
    Gs2(Gs2Cmd),
}

#[derive(Subcommand)]
enum Gs2Cmd {
    /// Validate a stored semigroup and report its invariants.
    Info {
        /// JSON file {"small_elements": [[x,y],...], "conductor": [c1,c2]}.
        #[arg(long)]
        file: PathBuf,
        /// Embedding dimension, supplied by the caller; the value set alone
        /// does not determine it.
        #[arg(long)]
        nu: u64,
        #[arg(long)]
        json: bool,
    },
    /// Close a parametrization over exact rationals into its value semigroup.
    FromParam {
        /// JSON file {"generators": [{"branch1": [[exp,num,den],...],
        /// "branch2": [...]}, ...], "truncation": N}.
        #[arg(long)]
        file: PathBuf,
        /// Embedding dimension; defaults to the generator count.
        #[arg(long)]
        nu: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

/// Message plus the process exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn inconsistency(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn census_failure(e: CensusError) -> Failure {
    match e {
        CensusError::Bookkeeping(_) => inconsistency(e.to_string()),
        CensusError::OracleTooLarge | CensusError::ResourceLimit { .. } => usage(e.to_string()),
    }
}

/// Validation and resource errors blame the input; the remaining variants
/// mean an internal safety net fired on data this tool derived itself.
fn plane_failure(e: PlaneError) -> Failure {
    match e {
        PlaneError::MissingOrigin
        | PlaneError::NoConductor
        | PlaneError::NotMinClosed(_, _)
        | PlaneError::CompletionFails(_, _)
        | PlaneError::NotAdditivelyClosed(_, _)
        | PlaneError::MultiplicityVectorMissing
        | PlaneError::BoxTooLarge { .. }
        | PlaneError::TruncationTooSmall
        | PlaneError::ZeroGenerator
        | PlaneError::UnitGenerator
        | PlaneError::InvalidCoefficient => usage(e.to_string()),
        _ => inconsistency(e.to_string()),
    }
}

fn main() {
    // Die quietly when a downstream pipe closes (info | head), like any
    // other line-oriented tool; the default Rust disposition panics instead.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap exits 2 on usage errors and 0 for --help/--version.
        Err(e) => e.exit(),
    };
    let outcome = match cli.cmd {
        Cmd::Info { gens, json, csv } => cmd_info(&gens, json, csv),
        Cmd::Ideal { gens, expr, json } => cmd_ideal(&gens, &expr, json),
        Cmd::Verify {
            max_genus,
            filter,
            check,
            json,
            csv,
            workers,
            split_genus,
            budget,
            progress,
        } => cmd_verify(
            max_genus,
            &filter,
            check.as_deref(),
            json,
            csv,
            workers,
            split_genus,
            budget,
            progress,
        ),
        Cmd::Enumerate {
            max_genus,
            count,
            json,
            csv,
            budget,
        } => cmd_enumerate(max_genus, count, json, csv, budget),
        Cmd::Oracle { max_genus, json } => cmd_oracle(max_genus, json),
        Cmd::Gs2(Gs2Cmd::Info { file, nu, json }) => cmd_gs2_info(&file, nu, json),
        Cmd::Gs2(Gs2Cmd::FromParam { file, nu, json }) => cmd_gs2_from_param(&file, nu, json),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

// ---------- report document ----------

fn command_echo() -> Vec<String> {
    let mut v = vec!["nsg".to_string()];
    v.extend(std::env::args().skip(1));
    v
}

fn document(records: Vec<Value>, census: Option<Value>) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": command_echo(),
        "records": records,
        "census": census,
    })
}

fn print_document(doc: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(doc).expect("report document serializes")
    );
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<Value, Failure> {
    serde_json::to_value(value).map_err(|e| inconsistency(format!("serialization failed: {e}")))
}

// ---------- shared printing ----------

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn join_u64(xs: &[u64]) -> String {
    xs.iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn print_verdict_table(verdicts: &[InequalityVerdict]) {
    println!("  {:<13} {:>12}    {:<12} {}", "check", "lhs", "rhs", "verdict");
    for v in verdicts {
        let verdict = if !v.holds {
            "FAILS"
        } else if v.equality {
            "holds, equality"
        } else {
            "holds"
        };
        println!(
            "  {:<13} {:>12} <= {:<12} {}",
            v.check_id, v.lhs, v.rhs, verdict
        );
    }
}

fn print_genus_rows(rows: &[GenusRow]) {
    println!(
        "{:>6} {:>12} {:>10} {:>11} {:>9} {:>6} {:>8}",
        "genus", "total", "alm.sym", "positioned", "ordinary", "lech", "dimd.eq"
    );
    for r in rows {
        println!(
            "{:>6} {:>12} {:>10} {:>11} {:>9} {:>6} {:>8}",
            r.genus,
            r.total,
            r.almost_symmetric,
            r.positioned,
            r.ordinary,
            r.lech_extremal,
            r.dimd_equality
        );
    }
}

// ---------- info ----------

fn cmd_info(gens: &[u64], json: bool, csv: bool) -> Result<i32, Failure> {
    let s = NumericalSemigroup::from_generators(gens).map_err(|e| usage(e.to_string()))?;
    let inv = s.invariants();
    let bk = ag_bookkeeping(&s).map_err(|e| inconsistency(e.to_string()))?;
    let mut verdicts = check_all(&s);
    verdicts.push(ag_key_verdict(&inv.generators, &bk));
    let eq = equality_analysis(&s);
    let code = if verdicts.iter().all(|v| v.holds) && eq.flagged.is_empty() {
        0
    } else {
        1
    };

    if csv {
        println!("{VERDICT_CSV_HEADER}");
        for v in &verdicts {
            println!("{}", v.csv_row());
        }
        return Ok(code);
    }
    if json {
        let record = json!({
            "generators": inv.generators,
            "invariants": to_json(inv)?,
            "bookkeeping": to_json(&bk)?,
            "verdicts": to_json(&verdicts)?,
            "equalities": to_json(&eq)?,
        });
        print_document(&document(vec![record], None));
        return Ok(code);
    }

    print_info_table(inv, &eq);
    println!(
        "  lengths: l(m/xc) {}   l(xRbar/m) {}   l(ker phi) {}   e(c) {}",
        bk.len_m_xc, bk.len_xrbar_m, bk.len_ker_phi, bk.e_c
    );
    println!();
    print_verdict_table(&verdicts);
    if !eq.flagged.is_empty() {
        println!("  equality-structure mismatches:");
        for v in &eq.flagged {
            println!("    {}: {} vs {}", v.check_id, v.lhs, v.rhs);
        }
    }
    Ok(code)
}

fn print_info_table(inv: &InvariantReport, eq: &EqualityAnalysis) {
    println!("semigroup generated by {}", join_u64(&inv.generators));
    println!();
    println!("  multiplicity e        {}", inv.e);
    println!("  embedding dim nu      {}", inv.nu);
    println!("  frobenius             {}", inv.frobenius);
    println!("  conductor             {}", inv.conductor);
    println!("  left part n           {}", inv.n);
    println!("  genus                 {}", inv.genus);
    println!("  depth q               {}", inv.depth_q);
    println!("  type t                {}", inv.type_t);
    println!("  pseudo-frobenius      {}", join_u64(&inv.pseudo_frobenius));
    println!();
    println!("  almost symmetric      {}", yes_no(inv.flags.almost_symmetric));
    println!("  positioned            {}", yes_no(inv.flags.positioned));
    println!("  ordinary              {}", yes_no(inv.flags.ordinary));
    match eq.lech_k {
        Some(k) => println!("  lech extremal         yes (k = {k})"),
        None => println!("  lech extremal         {}", yes_no(inv.flags.lech_extremal)),
    }
    match inv.flags.wilf_witness {
        Some(w) => println!("  wilf generator        yes (witness {w})"),
        None => println!("  wilf generator        no"),
    }
    println!();
}

// ---------- ideal expressions ----------

struct ExprParser<'a, 's> {
    src: &'a [u8],
    pos: usize,
    parent: &'s NumericalSemigroup,
}

impl<'a, 's> ExprParser<'a, 's> {
    fn new(src: &'a str, parent: &'s NumericalSemigroup) -> Self {
        ExprParser {
            src: src.as_bytes(),
            pos: 0,
            parent,
        }
    }

    fn parse(mut self) -> Result<RelativeIdeal<'s>, String> {
        let out = self.expr()?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(format!(
                "unexpected '{}' at byte {}",
                self.src[self.pos] as char, self.pos
            ));
        }
        Ok(out)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RelativeIdeal<'s>, String> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            let op = match self.peek() {
                Some(c @ (b'+' | b'&' | b'-')) => c,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let rhs = self.term()?;
            acc = match op {
                b'+' => acc.add(&rhs),
                b'&' => acc.intersect(&rhs),
                _ => acc.difference(&rhs),
            }
            .map_err(|e| e.to_string())?;
        }
    }

    fn term(&mut self) -> Result<RelativeIdeal<'s>, String> {
        self.skip_ws();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let inner = self.expr()?;
            self.skip_ws();
            if self.peek() != Some(b')') {
                return Err(format!("expected ')' at byte {}", self.pos));
            }
            self.pos += 1;
            return Ok(inner);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<RelativeIdeal<'s>, String> {
        let start = self.pos;
        while self
            .peek()
            .map(|c| c.is_ascii_alphabetic())
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match word {
            "omega" => Ok(RelativeIdeal::canonical_ideal(self.parent)),
            "M" => Ok(RelativeIdeal::maximal_ideal(self.parent)),
            "C" => Ok(RelativeIdeal::conductor_ideal(self.parent)),
            "S" => Ok(RelativeIdeal::semigroup_ideal(self.parent)),
            "gens" => {
                if self.peek() != Some(b':') {
                    return Err("expected ':' after gens".to_string());
                }
                self.pos += 1;
                let mut xs = vec![self.integer()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    xs.push(self.integer()?);
                }
                RelativeIdeal::from_generators(self.parent, &xs).map_err(|e| e.to_string())
            }
            "" => Err(format!("expected an ideal atom at byte {}", self.pos)),
            other => Err(format!(
                "unknown ideal atom '{other}' (expected omega, M, C, S, or gens:...)"
            )),
        }
    }

    fn integer(&mut self) -> Result<i64, String> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<i64>()
            .map_err(|_| format!("expected an integer at byte {start}"))
    }
}

fn cmd_ideal(gens: &[u64], expr: &str, json: bool) -> Result<i32, Failure> {
    let s = NumericalSemigroup::from_generators(gens).map_err(|e| usage(e.to_string()))?;
    let ideal = ExprParser::new(expr, &s)
        .parse()
        .map_err(|e| usage(format!("bad ideal expression: {e}")))?;
    let window = ideal.window_elements();

    if json {
        let record = json!({
            "expr": expr,
            "generators": s.minimal_generators(),
            "min": ideal.min_element(),
            "threshold": ideal.threshold(),
            "window": window,
        });
        print_document(&document(vec![record], None));
        return Ok(0);
    }

    println!(
        "ideal {} over the semigroup generated by {}",
        expr,
        join_u64(s.minimal_generators())
    );
    println!("  min element   {}", ideal.min_element());
    println!("  threshold     {}", ideal.threshold());
    let listed = window
        .iter()
        .map(i64::to_string)
        .collect::<Vec<_>>()
        .join(" ");
    if listed.is_empty() {
        println!("  members below the threshold: none");
    } else {
        println!("  members below the threshold: {listed}");
    }
    println!("  plus every z >= {}", ideal.threshold());
    Ok(0)
}

// ---------- verify ----------

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    max_genus: u64,
    filter: &str,
    check: Option<&str>,
    json: bool,
    csv: bool,
    workers: usize,
    split_genus: u64,
    budget: Option<u64>,
    progress: bool,
) -> Result<i32, Failure> {
    let filter = ClassFilter::parse(filter).ok_or_else(|| {
        usage(format!(
            "unknown filter '{filter}' (expected all, almost-symmetric, or positioned)"
        ))
    })?;
    let mut checks = Vec::new();
    if let Some(list) = check {
        for id in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if !CHECK_IDS.contains(&id) {
                return Err(usage(format!(
                    "unknown check id '{id}' (known: {})",
                    CHECK_IDS.join(", ")
                )));
            }
            checks.push(id.to_string());
        }
    }
    let cfg = SweepConfig {
        g_max: max_genus,
        checks,
        filter,
        workers,
        split_genus,
        budget,
        progress,
    };
    let summary = sweep(&cfg).map_err(census_failure)?;
    let code = if summary.violations.is_empty() { 0 } else { 1 };

    if csv {
        println!("{VERDICT_CSV_HEADER}");
        for v in &summary.violations {
            println!(
                "{},{},{},{},false,{}",
                v.check,
                join_u64(&v.generators),
                v.lhs,
                v.rhs,
                v.lhs == v.rhs
            );
        }
        return Ok(code);
    }
    if json {
        print_document(&document(Vec::new(), Some(to_json(&summary)?)));
        return Ok(code);
    }

    println!(
        "sweep to genus {}, filter {}",
        summary.g_max, summary.filter
    );
    print_genus_rows(&summary.rows);
    print_violations(&summary);
    Ok(code)
}

fn print_violations(summary: &CensusSummary) {
    if summary.violations.is_empty() {
        println!("violations: none");
        return;
    }
    println!("violations ({}):", summary.violations.len());
    for v in &summary.violations {
        println!(
            "  {} fails at genus {} on {}: {} <= {} is false",
            v.check,
            v.genus,
            join_u64(&v.generators),
            v.lhs,
            v.rhs
        );
    }
}

// ---------- enumerate / oracle ----------

fn cmd_enumerate(
    max_genus: u64,
    count: bool,
    json: bool,
    csv: bool,
    budget: Option<u64>,
) -> Result<i32, Failure> {
    let mut summary =
        enumerate_by_genus(max_genus, budget, |_, _| true, |_, _| {}).map_err(census_failure)?;
    summary.filter = "all".to_string();

    if csv {
        if count {
            println!("genus,total");
            for r in &summary.rows {
                println!("{},{}", r.genus, r.total);
            }
        } else {
            println!("genus,total,almost_symmetric,positioned,ordinary,lech_extremal,dimd_equality");
            for r in &summary.rows {
                println!(
                    "{},{},{},{},{},{},{}",
                    r.genus,
                    r.total,
                    r.almost_symmetric,
                    r.positioned,
                    r.ordinary,
                    r.lech_extremal,
                    r.dimd_equality
                );
            }
        }
        return Ok(0);
    }
    if json {
        print_document(&document(Vec::new(), Some(to_json(&summary)?)));
        return Ok(0);
    }
    if count {
        println!("{:>6} {:>12}", "genus", "count");
        for r in &summary.rows {
            println!("{:>6} {:>12}", r.genus, r.total);
        }
    } else {
        print_genus_rows(&summary.rows);
    }
    Ok(0)
}

fn cmd_oracle(max_genus: u64, json: bool) -> Result<i32, Failure> {
    let totals = brute_force_census(max_genus).map_err(census_failure)?;

    if json {
        let census = json!({
            "g_max": max_genus,
            "method": "gap-set oracle",
            "totals": totals,
        });
        print_document(&document(Vec::new(), Some(census)));
        return Ok(0);
    }
    println!("{:>6} {:>12}", "genus", "count");
    for (g, t) in totals.iter().enumerate() {
        println!("{:>6} {:>12}", g, t);
    }
    Ok(0)
}

// ---------- gs2 ----------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SemigroupFile {
    small_elements: Vec<(u64, u64)>,
    conductor: (u64, u64),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamFile {
    generators: Vec<ParamGenerator>,
    truncation: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamGenerator {
    branch1: Vec<(u64, i64, i64)>,
    branch2: Vec<(u64, i64, i64)>,
}

fn read_json_file<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn semigroup_value(s: &GoodSemigroupPlane) -> Value {
    json!({
        "small_elements": s.small_elements(),
        "conductor": s.gamma(),
    })
}

fn print_plane_report(r: &PlaneInvariantReport) {
    println!("  embedding dim nu      {}", r.nu);
    println!("  multiplicity e        {}", r.e);
    println!("  conductor degree e(c) {}", r.e_c);
    println!("  l(R/c)                {}", r.len_r_c);
    println!(
        "  multiplicity vector   ({}, {})",
        r.multiplicity_vector.0, r.multiplicity_vector.1
    );
    println!("  projection 1          {}", join_u64(&r.projections[0]));
    println!("  projection 2          {}", join_u64(&r.projections[1]));
    println!(
        "  lengths: l(m/xc) {}   l(xRbar/m) {}   l(ker phi) {}",
        r.bookkeeping.len_m_xc, r.bookkeeping.len_xrbar_m, r.bookkeeping.len_ker_phi
    );
    println!();
    print_verdict_table(&r.verdicts);
}

fn print_plane_semigroup(s: &GoodSemigroupPlane) {
    let gamma = s.gamma();
    println!("  conductor gamma       ({}, {})", gamma.0, gamma.1);
    let small = s
        .small_elements()
        .iter()
        .map(|p| format!("({},{})", p.0, p.1))
        .collect::<Vec<_>>()
        .join(" ");
    println!("  small elements        {small}");
}

fn cmd_gs2_info(file: &PathBuf, nu: u64, json: bool) -> Result<i32, Failure> {
    if nu == 0 {
        return Err(usage("nu must be positive"));
    }
    let parsed: SemigroupFile = read_json_file(file)?;
    let s = GoodSemigroupPlane::from_small_elements(&parsed.small_elements, parsed.conductor)
        .map_err(plane_failure)?;
    let report = s.invariants_plane(nu).map_err(plane_failure)?;
    let code = if report.verdicts.iter().all(|v| v.holds) {
        0
    } else {
        1
    };

    if json {
        let record = json!({
            "semigroup": semigroup_value(&s),
            "invariants": to_json(&report)?,
        });
        print_document(&document(vec![record], None));
        return Ok(code);
    }
    println!("good semigroup in N^2");
    print_plane_semigroup(&s);
    print_plane_report(&report);
    Ok(code)
}

fn cmd_gs2_from_param(file: &PathBuf, nu: Option<u64>, json: bool) -> Result<i32, Failure> {
    let parsed: ParamFile = read_json_file(file)?;
    let mut gens: Vec<(BranchSeries, BranchSeries)> = Vec::new();
    for g in &parsed.generators {
        gens.push((branch_series(&g.branch1)?, branch_series(&g.branch2)?));
    }
    let s = from_parametrization(&gens, parsed.truncation).map_err(plane_failure)?;

    let nu = nu.unwrap_or(parsed.generators.len() as u64);
    if nu == 0 {
        return Err(usage("nu must be positive (no generators, none supplied)"));
    }
    // The value set can fail to pick out a single multiplicity vector; the
    // closure is still worth printing, so that case drops the report only.
    let report = match s.invariants_plane(nu) {
        Ok(r) => Some(r),
        Err(PlaneError::MultiplicityVectorMissing) => None,
        Err(e) => return Err(plane_failure(e)),
    };
    let code = match &report {
        Some(r) if !r.verdicts.iter().all(|v| v.holds) => 1,
        _ => 0,
    };

    if json {
        let record = json!({
            "semigroup": semigroup_value(&s),
            "truncation": parsed.truncation,
            "invariants": match &report {
                Some(r) => to_json(r)?,
                None => Value::Null,
            },
        });
        print_document(&document(vec![record], None));
        return Ok(code);
    }
    println!(
        "value semigroup from {} generators at truncation {}",
        parsed.generators.len(),
        parsed.truncation
    );
    print_plane_semigroup(&s);
    match &report {
        Some(r) => print_plane_report(r),
        None => println!("  no componentwise-minimal nonzero member; length report skipped"),
    }
    Ok(code)
}

fn branch_series(entries: &[(u64, i64, i64)]) -> Result<BranchSeries, Failure> {
    let mut out = Vec::new();
    for &(exp, num, den) in entries {
        out.push((exp, coefficient(num, den).map_err(plane_failure)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse<'s>(src: &str, s: &'s NumericalSemigroup) -> Result<RelativeIdeal<'s>, String> {
        ExprParser::new(src, s).parse()
    }

    #[test]
    fn named_atoms_evaluate() {
        let s = NumericalSemigroup::from_generators(&[5, 7, 9]).unwrap();
        assert_eq!(parse("omega", &s).unwrap(), RelativeIdeal::canonical_ideal(&s));
        assert_eq!(parse(" M ", &s).unwrap(), RelativeIdeal::maximal_ideal(&s));
        assert_eq!(parse("C", &s).unwrap(), RelativeIdeal::conductor_ideal(&s));
        assert_eq!(parse("S", &s).unwrap(), RelativeIdeal::semigroup_ideal(&s));
        assert_eq!(
            parse("gens:0,-3", &s).unwrap(),
            RelativeIdeal::from_generators(&s, &[0, -3]).unwrap()
        );
    }

    #[test]
    fn operators_associate_left_at_equal_precedence() {
        let s = NumericalSemigroup::from_generators(&[5, 7, 9]).unwrap();
        let chained = parse("S + gens:1 - M", &s).unwrap();
        let sum = RelativeIdeal::semigroup_ideal(&s)
            .add(&RelativeIdeal::from_generators(&s, &[1]).unwrap())
            .unwrap();
        assert_eq!(chained, sum.difference(&RelativeIdeal::maximal_ideal(&s)).unwrap());
        // parentheses group the right-hand side first
        let grouped = parse("S + (gens:1 - M)", &s).unwrap();
        let inner = RelativeIdeal::from_generators(&s, &[1])
            .unwrap()
            .difference(&RelativeIdeal::maximal_ideal(&s))
            .unwrap();
        assert_eq!(
            grouped,
            RelativeIdeal::semigroup_ideal(&s).add(&inner).unwrap()
        );
    }

    #[test]
    fn parse_errors_name_the_problem() {
        let s = NumericalSemigroup::from_generators(&[5, 7, 9]).unwrap();
        assert!(parse("bogus", &s).unwrap_err().contains("unknown ideal atom"));
        assert!(parse("(M", &s).unwrap_err().contains("expected ')'"));
        assert!(parse("M M", &s).unwrap_err().contains("unexpected"));
        assert!(parse("gens:", &s).unwrap_err().contains("integer"));
        assert!(parse("gens 3", &s).unwrap_err().contains("':'"));
        assert!(parse("", &s).unwrap_err().contains("expected an ideal atom"));
    }
}
