//! C ABI for frepkit.
//!
//! Every fallible function returns an [`FrkStatus`] and writes results
//! through out-pointers. On failure, [`frk_last_error`] returns a message
//! for the calling thread. Handles are opaque and must be released with
//! the matching `_free` function. Node ids crossing the boundary are
//! 1-based, as in the CLI and file formats.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use frepkit::analyze::{self, Budget};
use frepkit::batch;
use frepkit::construct::{self, CageId};
use frepkit::dress::{self, RepairPolicy, StoreOptions, StoredSystem};
use frepkit::galois::FieldSpec;
use frepkit::incidence::{from_design, from_graph};
use frepkit::{Error, FrCode};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrkStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidParams = 2,
    InvalidCode = 3,
    Parse = 4,
    KOutOfRange = 5,
    BudgetExceeded = 6,
    NotApplicable = 7,
    Field = 8,
    Decode = 9,
    Irreparable = 10,
    Integrity = 11,
    Definition = 12,
    Io = 13,
    BufferTooSmall = 14,
    Panic = 15,
}

impl From<&Error> for FrkStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Params(_) => FrkStatus::InvalidParams,
            Error::NotRegular { .. } | Error::InvalidDesign(_) => FrkStatus::InvalidCode,
            Error::Parse { .. } | Error::Json(_) => FrkStatus::Parse,
            Error::KOutOfRange { .. } => FrkStatus::KOutOfRange,
            Error::BudgetExceeded { .. } => FrkStatus::BudgetExceeded,
            Error::NotApplicable(_) => FrkStatus::NotApplicable,
            Error::Field(_) => FrkStatus::Field,
            Error::InsufficientCoordinates { .. } | Error::InconsistentCoordinates => FrkStatus::Decode,
            Error::Irreparable { .. } => FrkStatus::Irreparable,
            Error::Integrity(_) => FrkStatus::Integrity,
            Error::Definition(_) => FrkStatus::Definition,
            Error::Io { .. } => FrkStatus::Io,
        }
    }
}

/// An FR code.
pub struct FrkCode(FrCode);

/// A stored system opened from a storage directory.
pub struct FrkSystem(StoredSystem);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FrkParams {
    pub n: usize,
    pub theta: usize,
    pub alpha: usize,
    pub rho: usize,
}

/// The tuple rho-(n, M, k, alpha, t) of a certified FRB code.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FrkFrb {
    pub rho: usize,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub alpha: usize,
    pub t: usize,
}

/// Repair policy: lowest-numbered replica first.
pub const FRK_POLICY_LOWEST_ID: u32 = 0;
/// Repair policy: rotate replica preference per symbol.
pub const FRK_POLICY_SPREAD: u32 = 1;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: FrkStatus, msg: impl Into<String>) -> FrkStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), FrkStatus>) -> FrkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FrkStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(FrkStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: frepkit::Result<T>) -> Result<T, FrkStatus> {
    r.map_err(|e| fail(FrkStatus::from(&e), e.to_string()))
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), FrkStatus> {
    if p.is_null() {
        Err(fail(FrkStatus::NullArgument, format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, FrkStatus> {
    non_null(p, what)?;
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(FrkStatus::InvalidParams, format!("{what} is not UTF-8")))
}

unsafe fn code_arg<'a>(code: *const FrkCode) -> Result<&'a FrCode, FrkStatus> {
    non_null(code, "code")?;
    Ok(&(*code).0)
}

fn budget(b: u64) -> Budget {
    if b == 0 {
        Budget::from_env()
    } else {
        Budget(b)
    }
}

unsafe fn emit_code(out: *mut *mut FrkCode, code: frepkit::Result<FrCode>) -> Result<(), FrkStatus> {
    non_null(out, "out")?;
    *out = Box::into_raw(Box::new(FrkCode(lift(code)?)));
    Ok(())
}

/// Message for the last failed call on this thread; empty if none.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn frk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn frk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Code of the Turan graph T(n, r).
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn frk_code_turan(n: usize, r: usize, out: *mut *mut FrkCode) -> FrkStatus {
    guard(|| emit_code(out, construct::turan(n, r).and_then(|g| from_graph(&g))))
}

/// Code of the complete graph K_n.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn frk_code_complete(n: usize, out: *mut *mut FrkCode) -> FrkStatus {
    guard(|| emit_code(out, construct::complete(n).and_then(|g| from_graph(&g))))
}

/// Code of K_{alpha,alpha}.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn frk_code_bipartite(alpha: usize, out: *mut *mut FrkCode) -> FrkStatus {
    guard(|| emit_code(out, construct::complete_bipartite(alpha).and_then(|g| from_graph(&g))))
}

/// Code of a catalog cage: "petersen", "heawood", "mcgee", "tutte-coxeter".
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn frk_code_cage(name: *const c_char, out: *mut *mut FrkCode) -> FrkStatus {
    guard(|| {
        let id: CageId = lift(str_arg(name, "name")?.parse())?;
        emit_code(out, from_graph(&construct::cage(id)))
    })
}

/// Transversal-design code with `rho` groups of `alpha` points.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn frk_code_td(rho: usize, alpha: usize, out: *mut *mut FrkCode) -> FrkStatus {
    guard(|| emit_code(out, construct::transversal_design(rho, alpha).and_then(|d| from_design(&d))))
}

/// Projective-plane code PG(2, q).
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn frk_code_plane(q: usize, out: *mut *mut FrkCode) -> FrkStatus {
    guard(|| emit_code(out, construct::projective_plane(q).and_then(|p| p.to_code())))
}

/// Parses a code from its text form.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn frk_code_from_text(text: *const c_char, out: *mut *mut FrkCode) -> FrkStatus {
    guard(|| emit_code(out, FrCode::from_text(str_arg(text, "text")?)))
}

/// Reads a code file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn frk_code_load(path: *const c_char, out: *mut *mut FrkCode) -> FrkStatus {
    guard(|| emit_code(out, FrCode::load(str_arg(path, "path")?)))
}

/// Writes a code file.
///
/// # Safety
/// `code` must come from this library; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn frk_code_save(code: *const FrkCode, path: *const c_char) -> FrkStatus {
    guard(|| lift(code_arg(code)?.save(str_arg(path, "path")?)))
}

/// Releases a code. Null is ignored.
///
/// # Safety
/// `code` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn frk_code_free(code: *mut FrkCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// # Safety
/// `code` must come from this library; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn frk_code_params(code: *const FrkCode, out: *mut FrkParams) -> FrkStatus {
    guard(|| {
        let c = code_arg(code)?;
        non_null(out, "out")?;
        *out = FrkParams {
            n: c.n(),
            theta: c.theta(),
            alpha: c.alpha(),
            rho: c.rho(),
        };
        Ok(())
    })
}

/// Whether the code satisfies every structural invariant.
///
/// # Safety
/// `code` must come from this library; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn frk_code_is_valid(code: *const FrkCode, out: *mut bool) -> FrkStatus {
    guard(|| {
        let c = code_arg(code)?;
        non_null(out, "out")?;
        *out = c.validate().is_valid();
        Ok(())
    })
}

/// Exact file size `M(k)`. A `budget` of 0 uses the default or
/// `FREPKIT_BUDGET`.
///
/// # Safety
/// `code` must come from this library; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn frk_file_size(code: *const FrkCode, k: usize, budget_subsets: u64, out: *mut usize) -> FrkStatus {
    guard(|| {
        let c = code_arg(code)?;
        non_null(out, "out")?;
        *out = lift(analyze::file_size_with(c, k, budget(budget_subsets), 0))?;
        Ok(())
    })
}

/// Exact batch size: the largest `t` for which every `t` symbols can be
/// read from distinct nodes.
///
/// # Safety
/// `code` must come from this library; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn frk_batch_t(code: *const FrkCode, budget_subsets: u64, out: *mut usize) -> FrkStatus {
    guard(|| {
        let c = code_arg(code)?;
        non_null(out, "out")?;
        *out = lift(batch::batch_t(c, budget(budget_subsets)))?.t;
        Ok(())
    })
}

/// Certifies the code as an FRB code for reconstruction degree `k`.
///
/// # Safety
/// `code` must come from this library; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn frk_frb_certify(code: *const FrkCode, k: usize, budget_subsets: u64, out: *mut FrkFrb) -> FrkStatus {
    guard(|| {
        let c = code_arg(code)?;
        non_null(out, "out")?;
        let cert = lift(batch::frb_certify(c, k, budget(budget_subsets)))?;
        *out = FrkFrb {
            rho: cert.rho,
            n: cert.n,
            m: cert.m,
            k: cert.k,
            alpha: cert.alpha,
            t: cert.t,
        };
        Ok(())
    })
}

/// FR-capacity bound for `1 <= k <= n`.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn frk_fr_capacity_bound(n: usize, k: usize, alpha: usize, rho: usize, out: *mut i64) -> FrkStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lift(analyze::fr_capacity_bound(n, k, alpha, rho))?;
        Ok(())
    })
}

/// MBR capacity `k*alpha - k(k-1)/2`.
#[no_mangle]
pub extern "C" fn frk_mbr_capacity(k: usize, alpha: usize) -> i64 {
    analyze::mbr_capacity(k, alpha)
}

/// Turan-code file size closed form; requires `r | n`.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn frk_turan_file_size(n: usize, r: usize, k: usize, out: *mut i64) -> FrkStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lift(analyze::turan_file_size(n, r, k))?;
        Ok(())
    })
}

/// Moore lower bound on the order of a `d`-regular graph of girth `g`.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn frk_moore_bound(d: usize, g: usize, out: *mut u64) -> FrkStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lift(analyze::moore_bound(d, g))?;
        Ok(())
    })
}

/// Whether no `rho = 2` code with these parameters attains the
/// FR-capacity bound at `k`.
#[no_mangle]
pub extern "C" fn frk_bound_not_tight(n: usize, alpha: usize, k: usize) -> bool {
    analyze::not_tight_flag(n, alpha, k).not_tight
}

/// Encodes `file` (exactly `M(k)` symbols) and writes a stored system to
/// `dir`. `field_order` 0 selects the smallest binary field that fits.
///
/// # Safety
/// `code` must come from this library, `file` must point to `len`
/// readable values, `dir` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frk_system_store(
    code: *const FrkCode,
    k: usize,
    file: *const u32,
    len: usize,
    dir: *const c_char,
    field_order: u64,
    out: *mut *mut FrkSystem,
) -> FrkStatus {
    guard(|| {
        let c = code_arg(code)?;
        non_null(file, "file")?;
        non_null(out, "out")?;
        let dir = PathBuf::from(str_arg(dir, "dir")?);
        let data = std::slice::from_raw_parts(file, len);
        let opts = StoreOptions {
            field: if field_order == 0 {
                None
            } else {
                Some(lift(FieldSpec::for_order(field_order))?)
            },
            ..Default::default()
        };
        let sys = lift(dress::store(c, k, data, &dir, &opts))?;
        *out = Box::into_raw(Box::new(FrkSystem(sys)));
        Ok(())
    })
}

/// Opens a stored system.
///
/// # Safety
/// `dir` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn frk_system_open(dir: *const c_char, out: *mut *mut FrkSystem) -> FrkStatus {
    guard(|| {
        non_null(out, "out")?;
        let sys = lift(StoredSystem::open(str_arg(dir, "dir")?))?;
        *out = Box::into_raw(Box::new(FrkSystem(sys)));
        Ok(())
    })
}

/// Releases a system handle. Files on disk are untouched. Null is ignored.
///
/// # Safety
/// `sys` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn frk_system_free(sys: *mut FrkSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// File size `M` of a stored system, or 0 for a null handle.
///
/// # Safety
/// `sys` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn frk_system_file_size(sys: *const FrkSystem) -> usize {
    if sys.is_null() {
        0
    } else {
        (*sys).0.file_size()
    }
}

/// Recovers the file from the `k` 1-based `nodes` into `buf`, which must
/// hold at least `M` values.
///
/// # Safety
/// `sys` must come from this library; `nodes` must point to `count`
/// values and `buf` to `buf_len` writable values.
#[no_mangle]
pub unsafe extern "C" fn frk_system_reconstruct(
    sys: *const FrkSystem,
    nodes: *const usize,
    count: usize,
    buf: *mut u32,
    buf_len: usize,
) -> FrkStatus {
    guard(|| {
        non_null(sys, "sys")?;
        non_null(nodes, "nodes")?;
        non_null(buf, "buf")?;
        let s = &(*sys).0;
        let ids: Vec<usize> = std::slice::from_raw_parts(nodes, count)
            .iter()
            .map(|&i| i.checked_sub(1).unwrap_or(usize::MAX))
            .collect();
        if buf_len < s.file_size() {
            return Err(fail(
                FrkStatus::BufferTooSmall,
                format!("buffer holds {buf_len} values, file has {}", s.file_size()),
            ));
        }
        if let Some(&bad) = ids.iter().find(|&&i| i >= s.code().n()) {
            let shown = bad.wrapping_add(1);
            return Err(fail(FrkStatus::InvalidParams, format!("node {shown} outside 1..={}", s.code().n())));
        }
        let file = lift(s.reconstruct(&ids))?;
        ptr::copy_nonoverlapping(file.as_ptr(), buf, file.len());
        Ok(())
    })
}

/// Repairs 1-based `node` by transfer and writes the download count to
/// `bandwidth` (may be null).
///
/// # Safety
/// `sys` must come from this library; `bandwidth` null or writable.
#[no_mangle]
pub unsafe extern "C" fn frk_system_repair(sys: *const FrkSystem, node: usize, policy: u32, bandwidth: *mut usize) -> FrkStatus {
    guard(|| {
        non_null(sys, "sys")?;
        let s = &(*sys).0;
        let policy = match policy {
            FRK_POLICY_LOWEST_ID => RepairPolicy::LowestId,
            FRK_POLICY_SPREAD => RepairPolicy::Spread,
            other => return Err(fail(FrkStatus::InvalidParams, format!("unknown repair policy {other}"))),
        };
        if node == 0 || node > s.code().n() {
            return Err(fail(FrkStatus::InvalidParams, format!("node {node} outside 1..={}", s.code().n())));
        }
        let plan = lift(dress::plan_repair(s, node - 1, policy))?;
        lift(dress::execute_repair(s, &plan))?;
        if !bandwidth.is_null() {
            *bandwidth = plan.bandwidth;
        }
        Ok(())
    })
}
