use std::fmt::Write;

use ddkg_core::{Error, Gamma, GentleTriple, Region, Result, Window};

/// The Auslander–Reiten mesh restricted to `window`: every valid vertex,
/// and each degree-0 sink arrow whose target stays inside the window.
pub fn export_dot(t: GentleTriple, window: &Region) -> Result<String> {
    let window = Window::new(*window).map_err(|_| Error::InfiniteWindow)?;
    let g = Gamma::new(t);
    let vertices = window.vertices(&g);
    let mut out = String::from("digraph ar {\n");
    for v in &vertices {
        writeln!(out, "  \"{v}\" [label=\"{v}\"];").unwrap();
    }
    for v in &vertices {
        for f in g.ar_sink_maps(v)? {
            match f.target() {
                Some(dst) if !f.is_zero() && window.contains_vertex(&dst) => {
                    writeln!(out, "  \"{v}\" -> \"{dst}\";").unwrap();
                }
                _ => {}
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ddkg_core::{Family, Interval};

    fn node_count(dot: &str, family: char) -> usize {
        dot.lines().filter(|l| l.contains("[label=") && l.trim_start().starts_with(&format!("\"{family}:"))).count()
    }

    #[test]
    fn small_window_counts() {
        let t = GentleTriple::new(1, 2, 0).unwrap();
        let dot = export_dot(t, &Region::rect(0, 2, 0, 2)).unwrap();
        assert_eq!(node_count(&dot, 'X'), 6);
        assert_eq!(node_count(&dot, 'Y'), 1);
        assert_eq!(node_count(&dot, 'Z'), 9);
        assert!(dot.contains("\"Y:0:(0,2)\""));
    }

    #[test]
    fn empty_and_infinite_windows() {
        let t = GentleTriple::new(1, 2, 0).unwrap();
        assert_eq!(export_dot(t, &Region::rect(1, 0, 0, 0)).unwrap(), "digraph ar {\n}\n");
        let half_plane = Region { x: Interval::at_least(0), ..Region::FULL };
        assert_eq!(export_dot(t, &half_plane), Err(Error::InfiniteWindow));
    }

    #[test]
    fn counts_match_enumeration() {
        for (r, n, m) in [(1, 2, 0), (2, 3, 1), (1, 1, 0)] {
            let t = GentleTriple::new(r, n, m).unwrap();
            let g = Gamma::new(t);
            let w = Window::rect(-3, 2, -1, 4);
            let dot = export_dot(t, w.region()).unwrap();
            let vertices = w.vertices(&g);
            let edges = vertices
                .iter()
                .flat_map(|v| [(1, 0), (0, 1)].map(|(da, db)| (*v, v.shifted(da, db))))
                .filter(|(v, u)| w.contains_vertex(u) && g.vertex_valid(u) && g.arrow_exists(v, u, 0))
                .count();
            let nodes: usize = [Family::X, Family::Y, Family::Z]
                .iter()
                .map(|f| node_count(&dot, f.to_string().chars().next().unwrap()))
                .sum();
            assert_eq!(nodes, vertices.len());
            assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), edges);
        }
    }
}
