//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes JSON strings and returns a JSON string. The `*_json`
//! functions hold the logic and also build natively for tests.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;
use sperner_core::solver::{find_solutions, SearchMode, SolveError};
use sperner_core::winding::{boundary_winding, WindingError};
use sperner_core::{ColoringSpec, Partition, PartitionComplex, SizeVector, VertexColoring};
use wasm_bindgen::prelude::*;

/// Largest `r` the page may request.
pub const MAX_R: u32 = 24;

/// Plane position of a barycentric point, corners 1, 2, 3 at 90°, 210°, 330°.
fn plane(weights: [f64; 3]) -> [f64; 2] {
    let mut xy = [0.0, 0.0];
    for (j, w) in weights.iter().enumerate() {
        let angle = (90.0 + 120.0 * j as f64).to_radians();
        xy[0] += w * angle.cos();
        xy[1] += w * angle.sin();
    }
    xy
}

struct Instance {
    k: PartitionComplex,
    colorings: Vec<VertexColoring>,
    index: BTreeMap<Partition, usize>,
}

impl Instance {
    fn new(r: u32, schemes: &str) -> Result<Self, String> {
        if !(1..=MAX_R).contains(&r) {
            return Err(format!("r must be between 1 and {MAX_R}"));
        }
        let specs: Vec<ColoringSpec> =
            serde_json::from_str(schemes).map_err(|e| format!("schemes: {e}"))?;
        let k = PartitionComplex::build(3, r).map_err(|e| e.to_string())?;
        let colorings = specs
            .iter()
            .map(|s| s.coloring(&k).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        let index = k.vertices().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Ok(Self { k, colorings, index })
    }

    fn indices<'a>(&self, face: impl IntoIterator<Item = &'a Partition>) -> Vec<usize> {
        face.into_iter().map(|p| self.index[p]).collect()
    }
}

fn sizes(m: &str) -> Result<SizeVector, String> {
    serde_json::from_str(m).map_err(|e| format!("m: {e}"))
}

fn to_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("demo output serializes")
}

/// Vertices with plane positions and colors, and the triangles of `K_{3,r}`.
pub fn subdivision_json(r: u32, schemes: &str) -> Result<String, String> {
    let inst = Instance::new(r, schemes)?;
    let vertices: Vec<_> = inst
        .k
        .vertices()
        .map(|p| {
            let w = inst.k.realize_vertex(p);
            json!({
                "label": p.to_string(),
                "xy": plane([w.weight(&1), w.weight(&2), w.weight(&3)]),
                "colors": inst.colorings.iter().map(|c| *c.apply(p)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let triangles: Vec<Vec<usize>> = inst.k.facets().iter().map(|f| inst.indices(f)).collect();
    Ok(to_string(&json!({ "r": r, "vertices": vertices, "triangles": triangles })))
}

/// Minimal solution faces as vertex indices into `subdivision_json`.
pub fn solve_json(r: u32, schemes: &str, m: &str, exhaustive: bool) -> Result<String, String> {
    let inst = Instance::new(r, schemes)?;
    let m = sizes(m)?;
    let mode = if exhaustive { SearchMode::Exhaustive } else { SearchMode::Greedy };
    let search = match find_solutions(&inst.k, &inst.colorings, &m, mode) {
        Ok(search) => search,
        Err(SolveError::NoSolution(bundle)) => {
            return Ok(to_string(&json!({ "theorem_violation": bundle })))
        }
        Err(e) => return Err(e.to_string()),
    };
    let reports: Vec<_> = search
        .reports
        .iter()
        .map(|rep| {
            json!({
                "face": inst.indices(&rep.face),
                "color_sets": rep.color_sets,
                "size_solution": rep.size_solution,
                "full_solution": rep.full_solution,
                "connected": rep.connected,
                "tree_shape": rep.tree_shape,
            })
        })
        .collect();
    Ok(to_string(&json!({
        "reports": reports,
        "theorem_instance": search.theorem_instance,
        "full_solution_facets": search.full_solution_facets,
        "connected_exists": search.connected_exists,
    })))
}

/// Image angle along the boundary of `|K_{3,r}|` and its winding number.
pub fn winding_json(r: u32, schemes: &str, m: &str) -> Result<String, String> {
    let inst = Instance::new(r, schemes)?;
    let m = sizes(m)?;
    let boundary = inst.indices(&inst.k.boundary_cycle().expect("n = 3"));
    match boundary_winding(&inst.k, &inst.colorings, &m) {
        Ok(rep) => Ok(to_string(&json!({
            "winding": rep.winding,
            "refined_winding": rep.refined_winding,
            "depth": rep.depth,
            "boundary": boundary,
            "trace": rep.trace,
        }))),
        Err(WindingError::BoundarySolutionFound(face)) => Ok(to_string(&json!({
            "boundary": boundary,
            "boundary_solution": inst.indices(&face),
        }))),
        Err(e) => Err(e.to_string()),
    }
}

#[wasm_bindgen]
pub fn subdivision(r: u32, schemes: &str) -> Result<String, JsValue> {
    subdivision_json(r, schemes).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn solve(r: u32, schemes: &str, m: &str, exhaustive: bool) -> Result<String, JsValue> {
    solve_json(r, schemes, m, exhaustive).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn winding(r: u32, schemes: &str, m: &str) -> Result<String, JsValue> {
    winding_json(r, schemes, m).map_err(|e| JsValue::from_str(&e))
}
