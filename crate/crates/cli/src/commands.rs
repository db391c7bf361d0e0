use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};

use coastpca::boundary::{trim_to_domain, LoopKind, TrimOutcome};
use coastpca::contour::simplify_contour_set;
use coastpca::gmsh::{parse_geo, write_geo};
use coastpca::io::{contours_to_string, format_f64, parse_raster, raster_to_string, read_contours, ContourDocument};
use coastpca::raster::{fill_nodata_nearest, simplify_raster_detailed};
use coastpca::sizefield::GradationRule;
use coastpca::{evaluate_size, BoundaryLoop, Contour, GeoPoint};

use crate::config::{ClassSettings, PipelineConfig};
use crate::error::CliError;
use crate::output::{write_atomic, PendingOutputs};
use crate::report::{BoundaryReport, ClassReport, RasterReport, Report};

const UNCLASSIFIED: &str = "unclassified";

fn class_key(c: &Contour) -> &str {
    c.class.as_deref().unwrap_or(UNCLASSIFIED)
}

/// Simplifies each class group with its settings; groups without settings
/// pass through. Output keeps document order.
fn simplify_groups(
    contours: &[Contour],
    settings: impl Fn(&str) -> Option<ClassSettings>,
    keep_small: bool,
) -> Result<(Vec<Contour>, BTreeMap<String, ClassReport>), CliError> {
    let mut groups: BTreeMap<&str, Vec<Contour>> = BTreeMap::new();
    for c in contours {
        groups.entry(class_key(c)).or_default().push(c.clone());
    }
    let mut replaced: HashMap<String, Contour> = HashMap::new();
    let mut reports = BTreeMap::new();
    for (class, members) in groups {
        let Some(s) = settings(class) else {
            reports.insert(class.to_string(), ClassReport::passthrough(members.len()));
            for c in members {
                replaced.insert(c.id.clone(), c);
            }
            continue;
        };
        let set = simplify_contour_set(&members, s.partition, s.modes)?;
        if let Some((id, e)) = set.failed.first() {
            return Err(CliError::from(e.clone()).context(&format!("contour {id}")));
        }
        let mut report = ClassReport::simplified(members.len(), s.partition, s.modes, &set);
        for c in &set.contours {
            replaced.insert(c.id.clone(), c.clone());
        }
        if keep_small {
            for c in members.iter().filter(|c| set.dropped.contains(&c.id)) {
                replaced.insert(c.id.clone(), c.clone());
            }
            report.kept += report.dropped.len();
        } else if !set.dropped.is_empty() {
            log::info!("class {class}: dropped {} contour(s) shorter than {}", set.dropped.len(), s.partition);
        }
        reports.insert(class.to_string(), report);
    }
    let out = contours
        .iter()
        .filter_map(|c| replaced.remove(&c.id))
        .collect();
    Ok((out, reports))
}

pub fn simplify_vector(input: &Path, out: &Path, p: usize, k: usize, keep_small: bool) -> Result<Report, CliError> {
    let doc = read_contours(input)?;
    let settings = ClassSettings { partition: p, modes: k };
    if p < 2 || k < 1 || k > p {
        return Err(CliError::Validation(format!("need partition >= 2 and 1 <= modes <= partition, got {p}, {k}")));
    }
    let (contours, classes) = simplify_groups(&doc.contours, |_| Some(settings), keep_small)?;
    write_atomic(out, contours_to_string(&ContourDocument::new(contours))?)?;
    let mut report = Report::new("simplify-vector");
    report.classes = classes;
    report.outputs.push(out.display().to_string());
    Ok(report)
}

pub fn simplify_raster_file(
    input: &Path,
    block: (usize, usize),
    k: usize,
    fill: bool,
) -> Result<(String, RasterReport), CliError> {
    let text = std::fs::read_to_string(input).map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
    let mut grid = parse_raster(&text)?;
    let holes = grid.values().iter().filter(|&&v| grid.is_nodata(v)).count();
    if fill && holes > 0 {
        grid = fill_nodata_nearest(&grid)?;
    }
    let s = simplify_raster_detailed(&grid, block.0, block.1, k)?;
    let report = RasterReport {
        nrows: grid.nrows,
        ncols: grid.ncols,
        block: [block.0, block.1],
        modes: k,
        blocks: s.block_count,
        filled_nodata: if fill { holes } else { 0 },
        variance_fraction: s.variance_fraction,
    };
    Ok((raster_to_string(&s.grid), report))
}

pub fn simplify_raster(input: &Path, out: &Path, block: (usize, usize), k: usize, fill: bool) -> Result<Report, CliError> {
    let (text, raster) = simplify_raster_file(input, block, k, fill)?;
    write_atomic(out, text)?;
    let mut report = Report::new("simplify-raster");
    report.raster = Some(raster);
    report.outputs.push(out.display().to_string());
    Ok(report)
}

/// Simplified shorelines and the closed domain built from them.
pub struct Domain {
    pub shorelines: Vec<Contour>,
    pub classes: BTreeMap<String, ClassReport>,
    pub trim: TrimOutcome,
    pub rules: Vec<GradationRule>,
    pub open_lines: usize,
}

pub fn load_shorelines(cfg: &PipelineConfig) -> Result<(Vec<Contour>, BTreeMap<String, ClassReport>), CliError> {
    let doc = read_contours(cfg.shoreline_path())?;
    let present: BTreeSet<&str> = doc.contours.iter().map(class_key).collect();
    let rules = cfg.gradation.rules()?;
    for class in cfg.classes.keys().chain(rules.iter().map(|r| &r.class)) {
        if !present.contains(class.as_str()) {
            return Err(CliError::Validation(format!("class {class} has no shoreline contours")));
        }
    }
    simplify_groups(&doc.contours, |class| cfg.classes.get(class).copied(), false)
}

pub fn build_domain(cfg: &PipelineConfig) -> Result<Domain, CliError> {
    let (shorelines, classes) = load_shorelines(cfg)?;
    let lines = cfg.open_lines()?;
    let trim = trim_to_domain(&shorelines, &lines)?;
    for w in &trim.warnings {
        log::warn!("{w}");
    }
    Ok(Domain {
        shorelines,
        classes,
        trim,
        rules: cfg.gradation.rules()?,
        open_lines: lines.len(),
    })
}

impl Domain {
    pub fn boundary_report(&self) -> BoundaryReport {
        let loops = &self.trim.loops;
        BoundaryReport {
            open_lines: self.open_lines,
            outer_loops: loops.iter().filter(|l| l.kind == LoopKind::Outer).count(),
            island_loops: loops.iter().filter(|l| l.kind == LoopKind::Island).count(),
            vertices: loops.iter().map(|l| l.vertices().len()).sum(),
            warnings: self.trim.warnings.clone(),
        }
    }
}

/// One closed contour per loop, classed `outer` or `island`.
pub fn loops_document(loops: &[BoundaryLoop]) -> Result<ContourDocument, CliError> {
    loops
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let class = match l.kind {
                LoopKind::Outer => "outer",
                LoopKind::Island => "island",
            };
            Contour::new(format!("loop-{i}"), l.vertices(), true)
                .map(|c| c.with_class(class))
                .map_err(CliError::from)
        })
        .collect::<Result<Vec<_>, _>>()
        .map(ContourDocument::new)
}

/// Renders the `.geo` text and checks it reads back to the same vertices.
pub fn render_geo(loops: &[BoundaryLoop], rules: &[GradationRule], h_max: f64) -> Result<String, CliError> {
    let text = write_geo(loops, rules, h_max)?;
    let model = parse_geo(&text)?;
    for (i, l) in loops.iter().enumerate() {
        if model.loop_vertices(i + 1).as_deref() != Some(l.vertices().as_slice()) {
            return Err(CliError::Numerical(format!("geo round trip changed loop {i}")));
        }
    }
    Ok(text)
}

pub fn boundary(cfg: &PipelineConfig, out: Option<PathBuf>) -> Result<Report, CliError> {
    let out = out
        .or_else(|| cfg.outputs.boundary.as_ref().map(|p| cfg.resolve(p)))
        .ok_or_else(|| CliError::Validation("no boundary output path (use --out)".into()))?;
    let domain = build_domain(cfg)?;
    write_atomic(&out, contours_to_string(&loops_document(&domain.trim.loops)?)?)?;
    let mut report = Report::new("boundary");
    report.boundary = Some(domain.boundary_report());
    report.classes = domain.classes;
    report.outputs.push(out.display().to_string());
    Ok(report)
}

pub fn export_geo(cfg: &PipelineConfig, out: Option<PathBuf>) -> Result<Report, CliError> {
    let out = out
        .or_else(|| cfg.outputs.geo.as_ref().map(|p| cfg.resolve(p)))
        .ok_or_else(|| CliError::Validation("no geo output path (use --out)".into()))?;
    let domain = build_domain(cfg)?;
    write_atomic(&out, render_geo(&domain.trim.loops, &domain.rules, cfg.gradation.h_max)?)?;
    let mut report = Report::new("export-geo");
    report.boundary = Some(domain.boundary_report());
    report.classes = domain.classes;
    report.outputs.push(out.display().to_string());
    Ok(report)
}

/// Target edge length at each probe point, one value per line.
pub fn sizefield(cfg: &PipelineConfig, probes: &[GeoPoint]) -> Result<Vec<String>, CliError> {
    let (shorelines, _) = load_shorelines(cfg)?;
    let rules = cfg.gradation.rules()?;
    let by_class: Vec<Vec<Contour>> = rules
        .iter()
        .map(|r| {
            shorelines
                .iter()
                .filter(|c| c.class.as_deref() == Some(r.class.as_str()))
                .cloned()
                .collect()
        })
        .collect();
    let bound: Vec<(&GradationRule, &[Contour])> = rules.iter().zip(by_class.iter().map(Vec::as_slice)).collect();
    probes
        .iter()
        .map(|&pt| evaluate_size(pt, &bound).map(format_f64).map_err(CliError::from))
        .collect()
}

pub fn pipeline(cfg: &PipelineConfig, out_dir: Option<&Path>) -> Result<Report, CliError> {
    let place = |p: &PathBuf| match out_dir {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => cfg.resolve(p),
    };
    let domain = build_domain(cfg)?;
    let mut report = Report::new("pipeline");
    let mut pending = PendingOutputs::default();

    if let Some(p) = &cfg.outputs.simplified {
        pending.add(place(p), contours_to_string(&ContourDocument::new(domain.shorelines.clone()))?);
    }
    if let Some(p) = &cfg.outputs.boundary {
        pending.add(place(p), contours_to_string(&loops_document(&domain.trim.loops)?)?);
    }
    if let Some(p) = &cfg.outputs.geo {
        pending.add(place(p), render_geo(&domain.trim.loops, &domain.rules, cfg.gradation.h_max)?);
    }
    if let Some(r) = &cfg.raster {
        let (text, raster) = simplify_raster_file(&cfg.resolve(&r.input), (r.block[0], r.block[1]), r.modes, r.fill_nodata)?;
        if let Some(p) = &cfg.outputs.raster {
            pending.add(place(p), text);
        }
        report.raster = Some(raster);
    }
    report.outputs = pending.paths().map(|p| p.display().to_string()).collect();
    pending.commit()?;

    report.boundary = Some(domain.boundary_report());
    report.classes = domain.classes;
    Ok(report)
}
