//! C ABI over `heegaard_seifert`.
//!
//! Handles are opaque and owned by the caller once returned; free them with
//! the matching `hs_*_free`. Strings returned by the library are freed with
//! [`hs_string_free`]. Every fallible call returns an [`HsStatus`] and leaves
//! a message for [`hs_last_error_message`] on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use heegaard_seifert::format::{parse_hg, parse_tgl, serialize_hg, serialize_surf};
use heegaard_seifert::homology::{HomologyError, HomologyPresentation};
use heegaard_seifert::plat::{compile_heegaard_graph, PlatError};
use heegaard_seifert::render::render_svg;
use heegaard_seifert::seifert::{generalized_seifert, SeifertError, SpanningSurface};
use heegaard_seifert::{validate_diagram, validate_graph, HeegaardGraph, LinkDiagram};

/// Status codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Invalid = 4,
    NoIntegralSolution = 5,
    Failed = 6,
    Panic = 7,
}

/// A validated Heegaard graph.
pub struct HsGraph(HeegaardGraph);

/// A validated link diagram. Only meaningful with the graph it was read against.
pub struct HsDiagram(LinkDiagram);

/// A spanning surface report.
pub struct HsSurface(SpanningSurface);

/// Handle counts of a surface.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HsSurfaceCounts {
    pub h0: u64,
    pub h1_pairing: u64,
    pub h1_twist: u64,
    pub h2: u64,
    pub chi: i64,
    pub boundary: u64,
    pub genus: u64,
}

#[derive(Debug, thiserror::Error)]
enum FfiError {
    #[error("null argument: {0}")]
    Null(&'static str),
    #[error("{0} is not valid UTF-8")]
    Utf8(&'static str),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
    #[error("no integral solution")]
    NoIntegralSolution,
    #[error("{0}")]
    Failed(String),
}

impl FfiError {
    fn status(&self) -> HsStatus {
        match self {
            FfiError::Null(_) => HsStatus::NullArgument,
            FfiError::Utf8(_) => HsStatus::InvalidUtf8,
            FfiError::Parse(_) => HsStatus::Parse,
            FfiError::Invalid(_) => HsStatus::Invalid,
            FfiError::NoIntegralSolution => HsStatus::NoIntegralSolution,
            FfiError::Failed(_) => HsStatus::Failed,
        }
    }
}

impl From<HomologyError> for FfiError {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::NoIntegralSolution => FfiError::NoIntegralSolution,
            other => FfiError::Failed(other.to_string()),
        }
    }
}

impl From<SeifertError> for FfiError {
    fn from(e: SeifertError) -> Self {
        match e {
            SeifertError::Homology(h) => h.into(),
            SeifertError::Invalid(r) => FfiError::Invalid(r.to_string()),
            other => FfiError::Failed(other.to_string()),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), FfiError>) -> HsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HsStatus::Ok,
        Ok(Err(e)) => {
            set_last_error(&e.to_string());
            e.status()
        }
        Err(_) => {
            set_last_error("internal panic");
            HsStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, name: &'static str) -> Result<&'a str, FfiError> {
    if p.is_null() {
        return Err(FfiError::Null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| FfiError::Utf8(name))
}

unsafe fn handle<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, FfiError> {
    p.as_ref().ok_or(FfiError::Null(name))
}

unsafe fn out_ptr<'a, T>(out: *mut T, name: &'static str) -> Result<&'a mut T, FfiError> {
    out.as_mut().ok_or(FfiError::Null(name))
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next library call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn hs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Free a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse and validate `.hg` text.
///
/// # Safety
/// `text_hg` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hs_graph_parse(text_hg: *const c_char, out: *mut *mut HsGraph) -> HsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let g = parse_hg(text(text_hg, "text")?).map_err(|e| FfiError::Parse(e.to_string()))?;
        let report = validate_graph(&g);
        if !report.is_valid() {
            return Err(FfiError::Invalid(report.to_string()));
        }
        *out = Box::into_raw(Box::new(HsGraph(g)));
        Ok(())
    })
}

/// Compile `.plat` text into a graph.
///
/// # Safety
/// `text_plat` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hs_graph_from_plat(
    text_plat: *const c_char,
    allow_framing_mismatch: bool,
    out: *mut *mut HsGraph,
) -> HsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let p = heegaard_seifert::format::parse_plat(text(text_plat, "text")?)
            .map_err(|e| FfiError::Parse(e.to_string()))?;
        let compiled = compile_heegaard_graph(&p, allow_framing_mismatch).map_err(|e| match e {
            PlatError::Invalid(_) | PlatError::FramingMismatch { .. } | PlatError::MissingFraming(_) => {
                FfiError::Invalid(e.to_string())
            }
            other => FfiError::Failed(other.to_string()),
        })?;
        *out = Box::into_raw(Box::new(HsGraph(compiled.graph)));
        Ok(())
    })
}

/// # Safety
/// `g` comes from this library and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hs_graph_free(g: *mut HsGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Serialize to `.hg` text. Null on failure.
///
/// # Safety
/// `g` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_graph_to_string(g: *const HsGraph) -> *mut c_char {
    let mut s = ptr::null_mut();
    guard(|| {
        s = owned_string(serialize_hg(&handle(g, "graph")?.0));
        Ok(())
    });
    s
}

/// Genus of the graph, or -1 on a null handle.
///
/// # Safety
/// `g` is a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hs_graph_genus(g: *const HsGraph) -> i64 {
    g.as_ref().map_or(-1, |g| g.0.genus as i64)
}

/// Determinant of the relator matrix and whether it is a unit.
///
/// # Safety
/// `g` is a live handle; outputs are writable.
#[no_mangle]
pub unsafe extern "C" fn hs_graph_determinant(g: *const HsGraph, det: *mut i64, is_zhs: *mut bool) -> HsStatus {
    guard(|| {
        let g = handle(g, "graph")?;
        let (det, is_zhs) = (out_ptr(det, "det")?, out_ptr(is_zhs, "is_zhs")?);
        let p = HomologyPresentation::from_graph(&g.0)?;
        *det = p.determinant;
        *is_zhs = p.is_zhs;
        Ok(())
    })
}

/// Parse and validate `.tgl` text against `g`.
///
/// # Safety
/// `g` is a live handle; `text_tgl` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hs_diagram_parse(
    g: *const HsGraph,
    text_tgl: *const c_char,
    out: *mut *mut HsDiagram,
) -> HsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let g = handle(g, "graph")?;
        let d = parse_tgl(text(text_tgl, "text")?, &g.0).map_err(|e| FfiError::Parse(e.to_string()))?;
        let report = validate_diagram(&g.0, &d);
        if !report.is_valid() {
            return Err(FfiError::Invalid(report.to_string()));
        }
        *out = Box::into_raw(Box::new(HsDiagram(d)));
        Ok(())
    })
}

/// # Safety
/// `d` comes from this library and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hs_diagram_free(d: *mut HsDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Run the full pipeline.
///
/// # Safety
/// `g` and `d` are live handles, `d` read against `g`; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hs_seifert(g: *const HsGraph, d: *const HsDiagram, out: *mut *mut HsSurface) -> HsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let (g, d) = (handle(g, "graph")?, handle(d, "diagram")?);
        let run = generalized_seifert(&g.0, &d.0)?;
        *out = Box::into_raw(Box::new(HsSurface(run.surface)));
        Ok(())
    })
}

/// # Safety
/// `s` comes from this library and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hs_surface_free(s: *mut HsSurface) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hs_surface_counts(s: *const HsSurface, out: *mut HsSurfaceCounts) -> HsStatus {
    guard(|| {
        let s = &handle(s, "surface")?.0;
        *out_ptr(out, "out")? = HsSurfaceCounts {
            h0: s.h0 as u64,
            h1_pairing: s.h1_pairing as u64,
            h1_twist: s.h1_twist as u64,
            h2: s.h2 as u64,
            chi: s.chi,
            boundary: s.boundary as u64,
            genus: s.genus as u64,
        };
        Ok(())
    })
}

/// Serialize to `.surf` text. Null on failure.
///
/// # Safety
/// `s` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_surface_to_string(s: *const HsSurface) -> *mut c_char {
    let mut out = ptr::null_mut();
    guard(|| {
        out = owned_string(serialize_surf(&handle(s, "surface")?.0));
        Ok(())
    });
    out
}

/// SVG for a graph and optional diagram (`d` may be null). Null on failure.
///
/// # Safety
/// `g` is a live handle; `d` is a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hs_render_svg(g: *const HsGraph, d: *const HsDiagram) -> *mut c_char {
    let mut out = ptr::null_mut();
    guard(|| {
        let g = handle(g, "graph")?;
        out = owned_string(render_svg(&g.0, d.as_ref().map(|d| &d.0), None));
        Ok(())
    });
    out
}
