//! Timeline renderings of a diagram model. Both carry the `M`, `TC` and `SC`
//! labels.

use std::fmt::Write as _;

use fretish_core::{DiagramModel, Obligation};

const BAR: usize = 32;

/// One timeline row followed by a legend.
///
/// ```text
/// M:nominal |----TC[=================]SC----|
/// ```
pub fn render_ascii(d: &DiagramModel) -> String {
    let mut row = String::new();
    if let Some(m) = &d.mode_label {
        let _ = write!(row, "M:{m} ");
    }
    row.push('|');
    let has_trigger = d.trigger_label != fretish_core::semantics::NO_LABEL;
    let lead = if has_trigger { "----TC" } else { "" };
    row.push_str(lead);
    match d.obligation {
        Obligation::Eventual => {
            let gap = BAR - lead.len() - 1;
            row.push_str(&"-".repeat(gap / 2));
            row.push('*');
            row.push_str(&"-".repeat(gap - gap / 2));
        }
        Obligation::ContinuousUntilStop => {
            let fill = BAR - lead.len() - 8;
            row.push('[');
            row.push_str(&"=".repeat(fill));
            row.push_str("]SC----");
        }
        Obligation::ContinuousAlways => {
            row.push('[');
            row.push_str(&"=".repeat(BAR - lead.len() - 2));
            row.push(']');
        }
    }
    row.push('|');

    let mut out = row;
    out.push('\n');
    if let Some(m) = &d.mode_label {
        let _ = writeln!(out, "M   {m}");
    }
    let _ = writeln!(out, "TC  {}", d.trigger_label);
    let _ = writeln!(out, "SC  {}", d.stop_label);
    let _ = writeln!(
        out,
        "{}  {}",
        obligation_mark(d.obligation),
        d.response_label
    );
    out
}

fn obligation_mark(o: Obligation) -> &'static str {
    match o {
        Obligation::Eventual => "*  ",
        Obligation::ContinuousUntilStop | Obligation::ContinuousAlways => "[=]",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// A self-contained SVG timeline with the same labels as the text form.
pub fn render_svg(d: &DiagramModel) -> String {
    let (x0, x1, y) = (40, 560, 70);
    let mut s = String::new();
    s.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"200\" \
         font-family=\"monospace\" font-size=\"12\">\n",
    );
    let _ = writeln!(
        s,
        "  <line x1=\"{x0}\" y1=\"{y}\" x2=\"{x1}\" y2=\"{y}\" stroke=\"black\"/>"
    );
    if let Some(m) = &d.mode_label {
        let _ = writeln!(
            s,
            "  <rect x=\"{x0}\" y=\"{}\" width=\"{}\" height=\"30\" fill=\"#e8f0ff\" stroke=\"#3060c0\"/>",
            y - 15,
            x1 - x0
        );
        let _ = writeln!(
            s,
            "  <text x=\"{x0}\" y=\"{}\">M: {}</text>",
            y - 22,
            escape(m)
        );
    }
    let tc = 140;
    let has_trigger = d.trigger_label != fretish_core::semantics::NO_LABEL;
    if has_trigger {
        let _ = writeln!(
            s,
            "  <line x1=\"{tc}\" y1=\"{}\" x2=\"{tc}\" y2=\"{}\" stroke=\"green\"/>",
            y - 12,
            y + 12
        );
        let _ = writeln!(s, "  <text x=\"{}\" y=\"{}\">TC</text>", tc - 8, y + 28);
    }
    let start = if has_trigger { tc } else { x0 };
    match d.obligation {
        Obligation::Eventual => {
            let _ = writeln!(
                s,
                "  <circle cx=\"{}\" cy=\"{y}\" r=\"5\" fill=\"black\"/>",
                (start + x1) / 2
            );
        }
        Obligation::ContinuousUntilStop => {
            let sc = 420;
            let _ = writeln!(
                s,
                "  <rect x=\"{start}\" y=\"{}\" width=\"{}\" height=\"8\" fill=\"black\"/>",
                y - 4,
                sc - start
            );
            let _ = writeln!(
                s,
                "  <line x1=\"{sc}\" y1=\"{}\" x2=\"{sc}\" y2=\"{}\" stroke=\"red\"/>",
                y - 12,
                y + 12
            );
            let _ = writeln!(s, "  <text x=\"{}\" y=\"{}\">SC</text>", sc - 8, y + 28);
        }
        Obligation::ContinuousAlways => {
            let _ = writeln!(
                s,
                "  <rect x=\"{start}\" y=\"{}\" width=\"{}\" height=\"8\" fill=\"black\"/>",
                y - 4,
                x1 - start
            );
        }
    }
    let mut line = 120;
    let mut legend = |label: &str, text: &str| {
        let _ = writeln!(
            s,
            "  <text x=\"{x0}\" y=\"{line}\">{label}: {}</text>",
            escape(text)
        );
        line += 18;
    };
    if let Some(m) = &d.mode_label {
        legend("M", m);
    }
    legend("TC", &d.trigger_label);
    legend("SC", &d.stop_label);
    legend(d.obligation.as_str(), &d.response_label);
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use fretish_core::{builtin_corpus, parse_requirement, render_diagram};

    #[test]
    fn scoped_until_shows_all_labels() {
        let ast = builtin_corpus()
            .requirement("UC5_R_14.2")
            .unwrap()
            .ast()
            .unwrap();
        let d = render_diagram(&ast).unwrap();
        let text = render_ascii(&d);
        assert!(text.starts_with("M:surgeStallPrevention |----TC[="));
        assert!(text.contains("]SC----|"));
        assert!(text.contains(
            "TC  diff(setNL, observedNL) < NLmax & (!pilotInput => !surgeStallAvoidance)"
        ));
        assert!(text.contains("SC  diff(setNL, observedNL) > NLmin"));
        let svg = render_svg(&d);
        for needle in [
            ">M: surgeStallPrevention<",
            ">TC<",
            ">SC<",
            "&amp; (!pilotInput =&gt; !surgeStallAvoidance)",
        ] {
            assert!(svg.contains(needle), "{needle}");
        }
    }

    #[test]
    fn rows_have_equal_width() {
        for text in [
            "Controller shall always (p)",
            "if (c) Controller shall (r)",
            "if (c) Controller shall until (s) (r)",
        ] {
            let d = render_diagram(&parse_requirement(text).unwrap()).unwrap();
            assert_eq!(
                render_ascii(&d).lines().next().unwrap().len(),
                BAR + 2,
                "{text}"
            );
        }
    }
}
