use std::collections::HashMap;
use std::fs;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Symmetric TSP instance with a dense distance matrix.
#[derive(Clone, Debug)]
pub struct TspInstance {
    name: String,
    n: usize,
    coords: Option<Vec<[f64; 2]>>,
    dist: Vec<f64>,
    best_known: Option<f64>,
}

impl TspInstance {
    /// Builds an instance from planar coordinates using TSPLIB `EUC_2D`
    /// distances (Euclidean, rounded to the nearest integer).
    pub fn from_coords(name: impl Into<String>, coords: Vec<[f64; 2]>) -> Result<Self> {
        let n = coords.len();
        check_size(n)?;
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = coords[i][0] - coords[j][0];
                let dy = coords[i][1] - coords[j][1];
                let d = nint((dx * dx + dy * dy).sqrt());
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Ok(Self {
            name: name.into(),
            n,
            coords: Some(coords),
            dist,
            best_known: None,
        })
    }

    /// Builds an instance from an explicit row-major distance matrix.
    pub fn from_matrix(name: impl Into<String>, matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = matrix.len();
        check_size(n)?;
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInstance(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            dist.extend_from_slice(row);
        }
        for i in 0..n {
            if dist[i * n + i] != 0.0 {
                return Err(Error::InvalidInstance(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let d = dist[i * n + j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidInstance(format!("bad distance d({i},{j}) = {d}")));
                }
                if d != dist[j * n + i] {
                    return Err(Error::InvalidInstance(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        Ok(Self {
            name: name.into(),
            n,
            coords: None,
            dist,
            best_known: None,
        })
    }

    /// Uniform random cities on a 10000 x 10000 square with `EUC_2D` distances.
    pub fn random_euclidean(n: usize, rng: &mut SeededRng) -> Result<Self> {
        let coords = (0..n)
            .map(|_| [rng.gen_range(0.0..10_000.0), rng.gen_range(0.0..10_000.0)])
            .collect();
        Self::from_coords(format!("rand{n}_s{}", rng.seed()), coords)
    }

    pub fn with_best_known(mut self, cost: f64) -> Self {
        self.best_known = Some(cost);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn coords(&self) -> Option<&[[f64; 2]]> {
        self.coords.as_deref()
    }

    pub fn best_known(&self) -> Option<f64> {
        self.best_known
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    /// Greedy nearest-neighbour tour starting at `start`; ties go to the
    /// lowest city index.
    pub fn nearest_neighbor_tour(&self, start: usize) -> Tour {
        let mut visited = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        let mut cur = start;
        visited[cur] = true;
        order.push(cur);
        for _ in 1..self.n {
            let mut best = usize::MAX;
            let mut best_d = f64::INFINITY;
            for (j, &d) in self.row(cur).iter().enumerate() {
                if !visited[j] && d < best_d {
                    best = j;
                    best_d = d;
                }
            }
            visited[best] = true;
            order.push(best);
            cur = best;
        }
        let cost = self.cycle_cost(&order);
        Tour { order, cost }
    }

    /// The `k` nearest other cities of every city, closest first.
    pub fn nearest_neighbors(&self, k: usize) -> Vec<Vec<usize>> {
        let k = k.min(self.n - 1);
        (0..self.n)
            .map(|i| {
                let mut others: Vec<usize> = (0..self.n).filter(|&j| j != i).collect();
                others.sort_by(|&a, &b| self.dist(i, a).total_cmp(&self.dist(i, b)).then(a.cmp(&b)));
                others.truncate(k);
                others
            })
            .collect()
    }

    fn cycle_cost(&self, order: &[usize]) -> f64 {
        let mut cost = 0.0;
        for w in order.windows(2) {
            cost += self.dist(w[0], w[1]);
        }
        cost + self.dist(order[order.len() - 1], order[0])
    }
}

fn check_size(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidInstance(format!("need at least 3 cities, got {n}")));
    }
    Ok(())
}

fn nint(x: f64) -> f64 {
    (x + 0.5).floor()
}

/// A closed tour: a permutation of the cities and its cycle length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tour {
    pub order: Vec<usize>,
    pub cost: f64,
}

impl Tour {
    pub fn new(instance: &TspInstance, order: Vec<usize>) -> Result<Self> {
        let cost = tour_cost(instance, &order)?;
        Ok(Self { order, cost })
    }

    /// Undirected edges of the cycle, including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.order.len();
        (0..n).map(move |i| (self.order[i], self.order[(i + 1) % n]))
    }
}

pub fn tour_cost(instance: &TspInstance, order: &[usize]) -> Result<f64> {
    let n = instance.len();
    if order.len() != n {
        return Err(Error::InvalidTour(format!("length {} for {n} cities", order.len())));
    }
    let mut seen = vec![false; n];
    for &c in order {
        if c >= n || std::mem::replace(&mut seen[c], true) {
            return Err(Error::InvalidTour(format!("city {c} out of range or repeated")));
        }
    }
    Ok(instance.cycle_cost(order))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum WeightKind {
    Euc2d,
    FullMatrix,
}

/// Parses a TSPLIB `.tsp` file (`EUC_2D` or `EXPLICIT`/`FULL_MATRIX`).
pub fn load_tsplib(path: impl AsRef<Path>) -> Result<TspInstance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_tsplib(&text, path)
}

pub fn parse_tsplib(text: &str, path: &Path) -> Result<TspInstance> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    let mut name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut dimension: Option<usize> = None;
    let mut weight_type: Option<String> = None;
    let mut weight_format: Option<String> = None;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));

    let mut coords: Vec<Option<[f64; 2]>> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let mut kind: Option<WeightKind> = None;
    let mut section: Option<&'static str> = None;
    let mut last_line = 0;

    while let Some((lineno, line)) = lines.next() {
        last_line = lineno;
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        if line == "NODE_COORD_SECTION" || line == "EDGE_WEIGHT_SECTION" {
            let n = dimension.ok_or_else(|| err(lineno, "section before DIMENSION".into()))?;
            let k = resolve_kind(weight_type.as_deref(), weight_format.as_deref())
                .map_err(|e| match e {
                    Error::UnsupportedEdgeWeight(_) => e,
                    other => err(lineno, other.to_string()),
                })?;
            kind = Some(k);
            if line == "NODE_COORD_SECTION" {
                if k != WeightKind::Euc2d {
                    return Err(err(lineno, "NODE_COORD_SECTION requires EUC_2D".into()));
                }
                coords = vec![None; n];
                section = Some("coords");
            } else {
                if k != WeightKind::FullMatrix {
                    return Err(err(lineno, "EDGE_WEIGHT_SECTION requires EXPLICIT weights".into()));
                }
                weights.reserve(n * n);
                section = Some("weights");
            }
            continue;
        }
        match section {
            Some("coords") => {
                let mut it = line.split_whitespace();
                let (id, x, y) = (it.next(), it.next(), it.next());
                let parse = |s: Option<&str>| s.and_then(|s| s.parse::<f64>().ok());
                let id = id
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| err(lineno, format!("bad node id in `{line}`")))?;
                let (Some(x), Some(y)) = (parse(x), parse(y)) else {
                    return Err(err(lineno, format!("bad coordinates in `{line}`")));
                };
                if id == 0 || id > coords.len() {
                    return Err(err(lineno, format!("node id {id} outside 1..={}", coords.len())));
                }
                if coords[id - 1].replace([x, y]).is_some() {
                    return Err(err(lineno, format!("duplicate node id {id}")));
                }
            }
            Some("weights") => {
                for tok in line.split_whitespace() {
                    let w = tok
                        .parse::<f64>()
                        .map_err(|_| err(lineno, format!("bad edge weight `{tok}`")))?;
                    weights.push(w);
                }
            }
            _ => {
                let Some((key, value)) = line.split_once(':') else {
                    return Err(err(lineno, format!("expected `KEY : VALUE`, got `{line}`")));
                };
                let value = value.trim();
                match key.trim() {
                    "NAME" => name = value.to_string(),
                    "TYPE" => {
                        if value != "TSP" {
                            return Err(err(lineno, format!("unsupported problem type `{value}`")));
                        }
                    }
                    "DIMENSION" => {
                        let n = value
                            .parse::<usize>()
                            .map_err(|_| err(lineno, format!("bad DIMENSION `{value}`")))?;
                        if n < 3 {
                            return Err(err(lineno, format!("DIMENSION {n}: need at least 3 cities")));
                        }
                        dimension = Some(n);
                    }
                    "EDGE_WEIGHT_TYPE" => weight_type = Some(value.to_string()),
                    "EDGE_WEIGHT_FORMAT" => weight_format = Some(value.to_string()),
                    _ => {}
                }
            }
        }
    }

    let n = dimension.ok_or_else(|| err(last_line, "missing DIMENSION".into()))?;
    let instance = match kind {
        Some(WeightKind::Euc2d) => {
            let coords = coords
                .into_iter()
                .enumerate()
                .map(|(i, c)| c.ok_or_else(|| err(last_line, format!("missing coordinates for node {}", i + 1))))
                .collect::<Result<Vec<_>>>()?;
            TspInstance::from_coords(name, coords)?
        }
        Some(WeightKind::FullMatrix) => {
            if weights.len() != n * n {
                return Err(err(
                    last_line,
                    format!("expected {} edge weights, found {}", n * n, weights.len()),
                ));
            }
            let rows = weights.chunks(n).map(<[f64]>::to_vec).collect();
            TspInstance::from_matrix(name, rows)?
        }
        None => return Err(err(last_line, "no NODE_COORD_SECTION or EDGE_WEIGHT_SECTION".into())),
    };
    Ok(instance)
}

fn resolve_kind(weight_type: Option<&str>, format: Option<&str>) -> Result<WeightKind> {
    match (weight_type, format) {
        (Some("EUC_2D"), _) => Ok(WeightKind::Euc2d),
        (Some("EXPLICIT"), Some("FULL_MATRIX")) => Ok(WeightKind::FullMatrix),
        (Some("EXPLICIT"), Some(f)) => Err(Error::UnsupportedEdgeWeight(format!("EXPLICIT/{f}"))),
        (Some("EXPLICIT"), None) => Err(Error::UnsupportedEdgeWeight("EXPLICIT without EDGE_WEIGHT_FORMAT".into())),
        (Some(other), _) => Err(Error::UnsupportedEdgeWeight(other.to_string())),
        (None, _) => Err(Error::InvalidInstance("missing EDGE_WEIGHT_TYPE".into())),
    }
}

/// Reads a `name,cost` CSV of best-known tour costs.
pub fn load_best_known(path: impl AsRef<Path>) -> Result<HashMap<String, f64>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let mut out = HashMap::new();
    for row in reader.deserialize::<(String, f64)>() {
        let (name, cost) = row?;
        out.insert(name, cost);
    }
    Ok(out)
}

/// Loads a TSPLIB file and attaches its best-known cost from `fixture`
/// when the fixture lists the instance name.
pub fn load_with_best_known(path: impl AsRef<Path>, fixture: Option<&Path>) -> Result<TspInstance> {
    let mut instance = load_tsplib(path)?;
    if let Some(fixture) = fixture {
        if let Some(&cost) = load_best_known(fixture)?.get(instance.name()) {
            instance = instance.with_best_known(cost);
        }
    }
    Ok(instance)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "NAME: tri\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 0\n3 0 4\nEOF\n";

    fn parse(text: &str) -> Result<TspInstance> {
        parse_tsplib(text, Path::new("fixture.tsp"))
    }

    #[test]
    fn triangle_distances() {
        let t = parse(TRIANGLE).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.name(), "tri");
        assert_eq!(t.dist(0, 1), 3.0);
        assert_eq!(t.dist(0, 2), 4.0);
        assert_eq!(t.dist(1, 2), 5.0);
    }

    #[test]
    fn triangle_cost_any_order() {
        let t = parse(TRIANGLE).unwrap();
        for order in [[0, 1, 2], [2, 1, 0], [1, 2, 0], [0, 2, 1]] {
            assert_eq!(tour_cost(&t, &order).unwrap(), 12.0);
        }
    }

    #[test]
    fn rejects_tiny_dimension() {
        let text = TRIANGLE.replace("DIMENSION: 3", "DIMENSION: 2");
        let e = parse(&text).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
    }

    #[test]
    fn unsupported_weight_type_is_named() {
        let text = TRIANGLE.replace("EUC_2D", "GEO");
        let e = parse(&text).unwrap_err();
        assert!(e.to_string().contains("GEO"), "{e}");
    }

    #[test]
    fn parse_error_reports_line() {
        let text = TRIANGLE.replace("2 3 0", "2 three 0");
        match parse(&text).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 7),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn full_matrix() {
        let text = "NAME: m\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 1 2\n1 0\n3 2 3 0\nEOF\n";
        let t = parse(text).unwrap();
        assert_eq!(t.dist(1, 2), 3.0);
        assert_eq!(tour_cost(&t, &[0, 1, 2]).unwrap(), 6.0);
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let text = "NAME: m\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 1 2 1 0 3 2 4 0\nEOF\n";
        assert!(parse(text).is_err());
    }

    #[test]
    fn non_permutation_rejected() {
        let t = parse(TRIANGLE).unwrap();
        assert!(tour_cost(&t, &[0, 0, 1]).is_err());
        assert!(tour_cost(&t, &[0, 1]).is_err());
        assert!(tour_cost(&t, &[0, 1, 3]).is_err());
    }

    #[test]
    fn nearest_neighbor_tour_is_valid() {
        let mut rng = SeededRng::new(1);
        let t = TspInstance::random_euclidean(30, &mut rng).unwrap();
        let tour = t.nearest_neighbor_tour(4);
        assert_eq!(tour.order[0], 4);
        assert_eq!(tour.cost, tour_cost(&t, &tour.order).unwrap());
    }
}
