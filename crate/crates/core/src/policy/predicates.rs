use crate::license::CcLicense;

/// SPDX identifiers accepted for source code.
pub const PERMISSIVE_CODE_LICENSES: [&str; 5] = ["Apache-2.0", "MIT", "BSD-2-Clause", "BSD-3-Clause", "Unlicense"];

/// True for the accepted permissive code licenses (case-insensitive SPDX id).
pub fn permissive_code_license(spdx_id: &str) -> bool {
    let id = spdx_id.trim();
    PERMISSIVE_CODE_LICENSES.iter().any(|l| l.eq_ignore_ascii_case(id))
}

/// CC0, Public Domain Mark and CC-BY; share-alike and non-commercial terms are excluded.
pub fn permissive_text_license(license: &CcLicense) -> bool {
    license.is_permissive()
}
