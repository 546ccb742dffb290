//! Creative Commons license identities and the creativecommons.org URL grammar.

use std::fmt;

use serde::{Deserialize, Serialize};
use url::Url;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Zero,
    Mark,
    By,
    BySa,
    ByNc,
    ByNd,
    ByNcSa,
    ByNcNd,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Zero,
        Family::Mark,
        Family::By,
        Family::BySa,
        Family::ByNc,
        Family::ByNd,
        Family::ByNcSa,
        Family::ByNcNd,
    ];

    /// CC0, the Public Domain Mark and CC-BY; everything with SA/NC/ND terms is not.
    pub fn is_permissive(self) -> bool {
        matches!(self, Family::Zero | Family::Mark | Family::By)
    }

    /// Path token used on creativecommons.org (`by-nc-sa`, `zero`, ...).
    pub fn url_token(self) -> &'static str {
        match self {
            Family::Zero => "zero",
            Family::Mark => "mark",
            Family::By => "by",
            Family::BySa => "by-sa",
            Family::ByNc => "by-nc",
            Family::ByNd => "by-nd",
            Family::ByNcSa => "by-nc-sa",
            Family::ByNcNd => "by-nc-nd",
        }
    }

    /// snake_case name as used in serialized output.
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Zero => "zero",
            Family::Mark => "mark",
            Family::By => "by",
            Family::BySa => "by_sa",
            Family::ByNc => "by_nc",
            Family::ByNd => "by_nd",
            Family::ByNcSa => "by_nc_sa",
            Family::ByNcNd => "by_nc_nd",
        }
    }

    fn from_license_token(token: &str) -> Option<Family> {
        Some(match token {
            "by" => Family::By,
            "by-sa" => Family::BySa,
            "by-nc" => Family::ByNc,
            "by-nd" => Family::ByNd,
            "by-nc-sa" => Family::ByNcSa,
            "by-nc-nd" => Family::ByNcNd,
            _ => return None,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CcLicense {
    pub family: Family,
    pub version: Option<String>,
    pub jurisdiction: Option<String>,
}

impl CcLicense {
    pub fn new(family: Family, version: Option<&str>, jurisdiction: Option<&str>) -> Self {
        CcLicense {
            family,
            version: version.map(str::to_owned),
            jurisdiction: jurisdiction.map(str::to_owned),
        }
    }

    pub fn is_permissive(&self) -> bool {
        self.family.is_permissive()
    }

    /// The canonical `https://creativecommons.org/...` URL for this license.
    pub fn canonical_url(&self) -> String {
        let version = self.version.as_deref().unwrap_or("1.0");
        match self.family {
            Family::Zero | Family::Mark => {
                format!("https://creativecommons.org/publicdomain/{}/{version}/", self.family.url_token())
            }
            family => {
                let mut url = format!("https://creativecommons.org/licenses/{}/{version}/", family.url_token());
                if let Some(j) = &self.jurisdiction {
                    url.push_str(j);
                    url.push('/');
                }
                url
            }
        }
    }
}

fn is_version(s: &str) -> bool {
    match s.split_once('.') {
        Some((major, minor)) => {
            !major.is_empty()
                && !minor.is_empty()
                && major.bytes().all(|b| b.is_ascii_digit())
                && minor.bytes().all(|b| b.is_ascii_digit())
        }
        None => false,
    }
}

fn is_jurisdiction(s: &str) -> bool {
    (2..=12).contains(&s.len()) && s.bytes().all(|b| b.is_ascii_lowercase() || b == b'-') && !is_trailer(s)
}

/// `deed`, `deed.nl`, `legalcode`, `legalcode.de` and similar human-readable suffixes.
fn is_trailer(s: &str) -> bool {
    let stem = s.split('.').next().unwrap_or(s);
    stem == "deed" || stem == "legalcode" || stem.starts_with("rdf")
}

pub(crate) fn is_cc_host(host: &str) -> bool {
    let host = host.trim_end_matches('.').to_ascii_lowercase();
    host == "creativecommons.org" || host == "www.creativecommons.org"
}

/// Parses a creativecommons.org license or public-domain URL.
///
/// Accepts http, https and scheme-relative forms; ignores queries, fragments
/// and a trailing `deed.<lang>` / `legalcode` segment. Returns `None` for
/// anything outside the recognised grammar, including `/certification/` paths.
pub fn parse_cc_url(url: &str) -> Option<CcLicense> {
    let url = url.trim();
    let absolute;
    let url = if url.starts_with("//") {
        absolute = format!("https:{url}");
        absolute.as_str()
    } else {
        url
    };
    let parsed = Url::parse(url).ok()?;
    if !matches!(parsed.scheme(), "http" | "https") || !is_cc_host(parsed.host_str()?) {
        return None;
    }
    let mut segments: Vec<&str> = parsed.path_segments()?.filter(|s| !s.is_empty()).collect();
    if segments.last().is_some_and(|s| is_trailer(s)) {
        segments.pop();
    }
    match segments.as_slice() {
        ["licenses", family, version, rest @ ..] if rest.len() <= 1 => {
            let family = Family::from_license_token(&family.to_ascii_lowercase())?;
            if !is_version(version) {
                return None;
            }
            let jurisdiction = match rest {
                [] => None,
                [j] if is_jurisdiction(j) => Some(*j),
                _ => return None,
            };
            Some(CcLicense::new(family, Some(version), jurisdiction))
        }
        ["publicdomain", kind, version] if is_version(version) => {
            let family = match kind.to_ascii_lowercase().as_str() {
                "zero" => Family::Zero,
                "mark" => Family::Mark,
                _ => return None,
            };
            Some(CcLicense::new(family, Some(version), None))
        }
        _ => None,
    }
}
