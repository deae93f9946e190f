use crate::metrics::TracePoint;

pub const TRACE_HEADER: &str = "generation,evaluations,functionality,active_gates,H_best,Q_running,T_running";

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

/// History/trace CSV. Absent potential and vitality are written as empty
/// fields.
pub fn emit_trace_csv(trace: &[TracePoint]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for p in trace {
        out.push_str(&format!(
            "{},{},{:.6},{},{:.6},{},{}\n",
            p.generation,
            p.evaluations,
            p.functionality,
            p.active_gates,
            p.h_best,
            opt(p.q_running),
            opt(p.t_running)
        ));
    }
    out
}
