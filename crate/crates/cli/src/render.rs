//! Text, LaTeX and JSON renderings of engine results.

use mackey_cpn::abgroup::{FgAbGroup, IntMatrix};
use mackey_cpn::cohomology::{CohomResult, Status};
use mackey_cpn::families::{Atom, CatalogExpr, SubsetSpec};
use mackey_cpn::mackey::MackeyFunctor;
use serde_json::{json, Value};

/// A computed result together with the name it was given, if any.
pub struct Named<'a> {
    pub result: &'a CohomResult,
    pub name: Option<CatalogExpr>,
    pub version: &'a str,
}

impl Named<'_> {
    /// Extra remark for results with no catalog name.
    fn note(&self) -> Option<&'static str> {
        if self.name.is_some() || !self.result.is_known() {
            return None;
        }
        if self.result.trace.iter().any(|t| t.rule == "nonsplit-c3") {
            Some("non-split extension")
        } else {
            Some("not a sum of Z_S and B_{T,S} atoms")
        }
    }
}

pub fn ascii(r: &Named) -> String {
    let res = r.result;
    let mut out = format!("H^({}) over C_{}^{}\n", res.grading, res.p, res.grading.n());
    match &res.status {
        Status::Known(m) => out.push_str(&ascii_diagram(m)),
        Status::Unknown(why) => out.push_str(&format!("unknown: {why}\n")),
    }
    if res.is_known() {
        let name = r.name.as_ref().map_or("none".to_string(), |e| e.to_string());
        out.push_str(&format!("recognize: {name}\n"));
    }
    if let Some(note) = r.note() {
        out.push_str(&format!("note: {note}\n"));
    }
    out.push_str("trace:\n");
    for t in &res.trace {
        match &t.subquery {
            Some(q) => out.push_str(&format!("  {} [{}] <- {q}\n", t.rule, t.basis)),
            None => out.push_str(&format!("  {} [{}]\n", t.rule, t.basis)),
        }
    }
    out
}

/// Levels top to bottom with the `res` / `tr` pair between adjacent lines.
pub fn ascii_diagram(m: &MackeyFunctor) -> String {
    let mut out = String::new();
    for k in (0..=m.n()).rev() {
        out.push_str(&format!("  {k}: {}\n", group_text(m.level(k))));
        if k > 0 {
            out.push_str(&format!(
                "     | res {}  ^ tr {}\n",
                matrix_text(m.res(k).matrix()),
                matrix_text(m.tr(k).matrix())
            ));
        }
    }
    out
}

fn matrix_text(m: &IntMatrix) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        "0".into()
    } else {
        m.to_string()
    }
}

fn group_text(g: &FgAbGroup) -> String {
    if g.is_trivial() {
        "0".into()
    } else {
        g.to_string()
    }
}

pub fn json(r: &Named) -> Value {
    let res = r.result;
    let (status, functor) = match &res.status {
        Status::Known(m) => ("known", m.to_json()),
        Status::Unknown(_) => ("unknown", Value::Null),
    };
    json!({
        "p": res.p,
        "n": res.grading.n(),
        "grading": res.grading.to_string(),
        "status": status,
        "functor": functor,
        "name": r.name.as_ref().map(|e| e.to_string()),
        "note": r.note(),
        "trace": res.trace_json(),
        "version": r.version,
    })
}

pub fn latex(r: &Named) -> String {
    let res = r.result;
    let mut out = format!(
        "% H^({}) over C_{}^{}\n",
        res.grading,
        res.p,
        res.grading.n()
    );
    match &res.status {
        Status::Known(m) => {
            out.push_str(&latex_diagram(m));
            if let Some(e) = &r.name {
                out.push_str(&format!("% recognize: {}\n\\[ {} \\]\n", e, latex_expr(e)));
            } else {
                out.push_str("% recognize: none\n");
            }
            if let Some(note) = r.note() {
                out.push_str(&format!("% note: {note}\n"));
            }
        }
        Status::Unknown(why) => out.push_str(&format!("% unknown: {why}\n")),
    }
    out
}

/// A vertical `xymatrix` with restriction on the left and transfer on the
/// right of each step.
pub fn latex_diagram(m: &MackeyFunctor) -> String {
    let mut rows = Vec::new();
    for k in (0..=m.n()).rev() {
        let mut cell = latex_group(m.level(k));
        if k > 0 {
            cell.push_str(&format!(
                " \\ar@/_1pc/[d]_{{{}}}",
                latex_matrix(m.res(k).matrix())
            ));
        }
        if k < m.n() {
            cell.push_str(&format!(
                " \\ar@/_1pc/[u]_{{{}}}",
                latex_matrix(m.tr(k + 1).matrix())
            ));
        }
        rows.push(cell);
    }
    format!("\\[\n\\xymatrix{{\n{}\n}}\n\\]\n", rows.join(" \\\\\n"))
}

fn latex_group(g: &FgAbGroup) -> String {
    if g.is_trivial() {
        return "0".into();
    }
    let mut parts = Vec::new();
    match g.rank() {
        0 => {}
        1 => parts.push("\\mathbb{Z}".to_string()),
        r => parts.push(format!("\\mathbb{{Z}}^{{{r}}}")),
    }
    parts.extend(g.torsion().iter().map(|d| format!("\\mathbb{{Z}}/{d}")));
    parts.join(" \\oplus ")
}

fn latex_matrix(m: &IntMatrix) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        return "0".into();
    }
    if m.rows() == 1 && m.cols() == 1 {
        return m[(0, 0)].to_string();
    }
    let rows: Vec<String> = m
        .row_vecs()
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" & "))
        .collect();
    format!("\\left[\\begin{{smallmatrix}}{}\\end{{smallmatrix}}\\right]", rows.join(" \\\\ "))
}

fn latex_set(s: &SubsetSpec) -> String {
    if s.is_empty() {
        "\\emptyset".into()
    } else {
        let items: Vec<String> = s.members().iter().map(|k| k.to_string()).collect();
        format!("\\{{{}\\}}", items.join(","))
    }
}

pub fn latex_expr(e: &CatalogExpr) -> String {
    if e.is_zero() {
        return "\\underline{0}".into();
    }
    let parts: Vec<String> = e
        .atoms()
        .iter()
        .map(|a| match a {
            Atom::Z(s) if s.is_empty() => "\\underline{\\mathbb{Z}}".into(),
            Atom::Z(s) if s.len() == e.n => "\\underline{\\mathbb{Z}}^\\ast".into(),
            Atom::Z(s) => format!("\\underline{{\\mathbb{{Z}}}}_{{{}}}", latex_set(s)),
            Atom::B(t, s) => format!("\\underline{{B}}_{{{},{}}}", latex_set(t), latex_set(s)),
            Atom::T => format!("\\underline{{T}}({})", e.n),
            Atom::Zero => "\\underline{0}".into(),
        })
        .collect();
    parts.join(" \\oplus ")
}
