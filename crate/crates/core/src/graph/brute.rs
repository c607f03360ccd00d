use super::SimpleGraph;
use crate::error::AnalysisError;

pub const BRUTE_FORCE_MAX_VERTICES: usize = 8;

/// Reference semantics for [`find_even_circuit`](super::find_even_circuit):
/// walks every trail from every start vertex and reports whether one closes
/// up after an even number of edges.
pub fn brute_force_even_circuit_exists(g: &SimpleGraph) -> Result<bool, AnalysisError> {
    if g.vertex_count() > BRUTE_FORCE_MAX_VERTICES {
        return Err(AnalysisError::TooLarge { vertices: g.vertex_count(), limit: BRUTE_FORCE_MAX_VERTICES });
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut used = vec![false; edges.len()];
    for start in 0..g.vertex_count() {
        if walk(&edges, &mut used, start, start, 0) {
            return Ok(true);
        }
    }
    Ok(false)
}

fn walk(edges: &[(usize, usize)], used: &mut [bool], start: usize, at: usize, len: usize) -> bool {
    if len > 0 && at == start && len.is_multiple_of(2) {
        return true;
    }
    for i in 0..edges.len() {
        if used[i] {
            continue;
        }
        let (a, b) = edges[i];
        let next = if a == at {
            b
        } else if b == at {
            a
        } else {
            continue;
        };
        used[i] = true;
        let found = walk(edges, used, start, next, len + 1);
        used[i] = false;
        if found {
            return true;
        }
    }
    false
}
