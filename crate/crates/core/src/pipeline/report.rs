use std::fmt::Write;

use super::Certificate;
use crate::reduction::Method;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Deterministic serialisation of a certificate.
pub fn emit_report(cert: &Certificate, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(cert).expect("certificate is plain data"),
        Format::Text => text(cert),
    }
}

fn text(c: &Certificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "constants: {}, precision: {} digits", c.constants_mode, c.precision_used);
    let _ = writeln!(s, "\nlow range 0..=500: {} solutions", c.solution_set.len());
    for r in &c.solution_set {
        let _ = writeln!(s, "  P({}) = {}  [{}]", r.n, r.value, r.pattern);
    }
    let _ = writeln!(s, "\ninitial bounds");
    let _ = writeln!(s, "  n < {}", c.initial_bounds.n_bound);
    let _ = writeln!(s, "  ell + m < {}", c.initial_bounds.ell_plus_m_bound);

    let _ = writeln!(s, "\nstage 1 (ell): bound {}", c.stage1.bound);
    for o in &c.stage1.outcomes {
        let _ = writeln!(s, "  d1={} {} q_{} k <= {}{}", o.d1, method(o.method), o.q_index, o.k_bound, eps(&o.epsilon_lower));
    }

    let _ = writeln!(s, "\nstage 2 (n): bound {} over {} instances", c.stage2.bound, c.stage2.outcomes.len());
    if let Some(worst) = c.stage2.outcomes.iter().max_by_key(|o| o.k_bound) {
        let _ = writeln!(
            s,
            "  largest: d1={} d2={} ell={} k <= {}",
            worst.d1,
            worst.d2.unwrap_or_default(),
            worst.ell.unwrap_or_default(),
            worst.k_bound
        );
    }
    for o in c.stage2.outcomes.iter().filter(|o| o.method == Method::Legendre) {
        let _ = writeln!(
            s,
            "  d1={} d2={} ell={} {} k <= {}",
            o.d1,
            o.d2.unwrap_or_default(),
            o.ell.unwrap_or_default(),
            method(o.method),
            o.k_bound
        );
    }
    let _ = writeln!(s, "\nfinal: n <= {}, consistent: {}", c.final_n_bound, c.consistency);
    s
}

fn method(m: Method) -> &'static str {
    match m {
        Method::DujellaPetho => "dujella-petho",
        Method::Legendre => "legendre",
    }
}

fn eps(e: &Option<String>) -> String {
    e.as_ref().map(|e| format!(", eps >= {e}")).unwrap_or_default()
}
