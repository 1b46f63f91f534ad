//! Run configuration: subcommand schemas, config file merging and typed parameter access.

use serde_json::Value;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const PARALLELISM_ENV: &str = "EQUI_PARALLELISM";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    U64,
    I64,
    F64,
    Str,
}

pub struct ArgSpec {
    pub name: &'static str,
    pub kind: Kind,
    pub help: &'static str,
}

pub struct CommandSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub args: &'static [ArgSpec],
}

const fn a(name: &'static str, kind: Kind, help: &'static str) -> ArgSpec {
    ArgSpec { name, kind, help }
}

const FORM: ArgSpec = a("form", Kind::Str, "delta, f11, or a path to an n,a_n CSV with .meta.json sidecar [delta]");

pub const COMMANDS: &[CommandSpec] = &[
    CommandSpec {
        name: "local-integral",
        about: "Local integral I_p and its normalization tilde I_p",
        args: &[
            a("p", Kind::U64, "prime p"),
            a("lambda-p", Kind::F64, "Hecke eigenvalue lambda_p (float and extended modes) [0]"),
            a("alpha", Kind::Str, "Satake parameter as a rational n/d (exact mode)"),
            a("trunc", Kind::U64, "truncation lam_max of the Weyl-group sum [60]"),
            a("bits", Kind::U64, "working precision in extended mode [256]"),
        ],
    },
    CommandSpec {
        name: "weyl-gf",
        about: "Bivariate generating function of the extended affine Weyl group",
        args: &[a("order", Kind::U64, "total degree [10]")],
    },
    CommandSpec {
        name: "shifted-sum",
        about: "Exact shifted convolution sum against the sieve bound",
        args: &[
            FORM,
            a("l", Kind::I64, "shift [1]"),
            a("x", Kind::F64, "length [1000]"),
            a("eps", Kind::F64, "epsilon in (0,1) [0.2]"),
        ],
    },
    CommandSpec {
        name: "sieve-audit",
        about: "z-part fibers and large-sieve ratios",
        args: &[
            a("x", Kind::F64, "length [10000]"),
            a("z", Kind::F64, "smoothness bound [10]"),
            a("l", Kind::I64, "shift [1]"),
        ],
    },
    CommandSpec {
        name: "psi",
        about: "The multiplicative function psi and its closed form",
        args: &[
            a("l", Kind::U64, "argument [12]"),
            a("audit-max", Kind::U64, "compare definition and closed form for l up to this [10000]"),
        ],
    },
    CommandSpec {
        name: "divisor-lemma",
        about: "Divisor-sum lemma ratio for squarefree q",
        args: &[
            a("q", Kind::U64, "squarefree modulus; omit to sample"),
            a("k", Kind::U64, "even weight [12]"),
            a("eps", Kind::F64, "epsilon in (0,1) [0.5]"),
            a("samples", Kind::U64, "random squarefree q to draw when q is omitted [200]"),
            a("seed", Kind::U64, "sampling seed [1]"),
        ],
    },
    CommandSpec {
        name: "is-integral",
        about: "Bessel-Mellin integral I_s against its upper bound",
        args: &[
            a("s-re", Kind::F64, "Re s [0]"),
            a("s-im", Kind::F64, "Im s [0]"),
            a("l", Kind::I64, "shift [1]"),
            a("n", Kind::U64, "index n [1]"),
            a("x", Kind::F64, "scale x [1]"),
            a("k", Kind::U64, "weight k [12]"),
            a("a", Kind::I64, "decay exponent A [3]"),
        ],
    },
    CommandSpec {
        name: "weighted-sum",
        about: "Smoothly weighted shifted sum S_s(l, x)",
        args: &[
            FORM,
            a("s-re", Kind::F64, "Re s [0]"),
            a("s-im", Kind::F64, "Im s [0]"),
            a("l", Kind::I64, "shift [1]"),
            a("x", Kind::F64, "scale x [10]"),
            a("eps", Kind::F64, "epsilon for the bound [0.2]"),
        ],
    },
    CommandSpec {
        name: "eta",
        about: "Eta-product expansion and Hecke consistency",
        args: &[
            a("form", Kind::Str, "delta, f11, or an exponent pattern like 1:2,11:2 [delta]"),
            a("n", Kind::U64, "number of coefficients [1000]"),
        ],
    },
    CommandSpec {
        name: "ingest",
        about: "Validate a coefficient file (holomorphic or Maass)",
        args: &[a("path", Kind::Str, "CSV file with .meta.json sidecar"), a("file-format", Kind::Str, "coefficient file format [csv]")],
    },
    CommandSpec {
        name: "rankin-selberg",
        about: "Petersson norm by quadrature against the adjoint L-value formula",
        args: &[
            FORM,
            a("euler-cutoff", Kind::U64, "Euler product cutoff P [100000]"),
            a("panels", Kind::U64, "quadrature panels per axis [8]"),
            a("order", Kind::U64, "Gauss-Legendre order [12]"),
        ],
    },
    CommandSpec {
        name: "unfold",
        about: "Unfolding identity for an incomplete Eisenstein series",
        args: &[
            FORM,
            a("big-y", Kind::F64, "dilation Y [2]"),
            a("panels", Kind::U64, "quadrature panels per axis [8]"),
            a("order", Kind::U64, "Gauss-Legendre order [12]"),
        ],
    },
    CommandSpec {
        name: "eisenstein-residue",
        about: "delta E(1 + delta, z) against 3/pi",
        args: &[
            a("x", Kind::F64, "Re z [0]"),
            a("y", Kind::F64, "Im z [1]"),
            a("delta", Kind::F64, "offset in (0, 0.1] [0.001]"),
        ],
    },
    CommandSpec {
        name: "weyl-period",
        about: "Period of |f|^2 y^k against a test function",
        args: &[
            FORM,
            a("test", Kind::Str, "incomplete, or a path to a Maass coefficient CSV [incomplete]"),
            a("big-y", Kind::F64, "dilation Y for the incomplete Eisenstein test [2]"),
            a("panels", Kind::U64, "quadrature panels per axis [8]"),
            a("order", Kind::U64, "Gauss-Legendre order [12]"),
        ],
    },
    CommandSpec { name: "report-all", about: "Run the full acceptance suite", args: &[] },
];

pub fn command_spec(name: &str) -> Option<&'static CommandSpec> {
    COMMANDS.iter().find(|c| c.name == name)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrecisionMode {
    Float64,
    Extended,
    Exact,
}

impl PrecisionMode {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "float64" | "float" => Ok(PrecisionMode::Float64),
            "extended" => Ok(PrecisionMode::Extended),
            "exact" => Ok(PrecisionMode::Exact),
            other => Err(format!("unknown precision mode {other:?} (float64, extended, exact)")),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            PrecisionMode::Float64 => "float64",
            PrecisionMode::Extended => "extended",
            PrecisionMode::Exact => "exact",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub subcommand: String,
    pub parameters: Params,
    pub precision_mode: PrecisionMode,
    pub parallelism: usize,
    pub output_path: Option<PathBuf>,
}

/// Typed view of validated parameters.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params(pub BTreeMap<String, Value>);

impl Params {
    fn get(&self, name: &str) -> Option<&Value> {
        self.0.get(name)
    }

    pub fn opt_u64(&self, name: &str) -> Option<u64> {
        self.get(name).and_then(Value::as_u64)
    }

    pub fn u64_or(&self, name: &str, default: u64) -> u64 {
        self.opt_u64(name).unwrap_or(default)
    }

    pub fn require_u64(&self, name: &str) -> Result<u64, String> {
        self.opt_u64(name).ok_or_else(|| format!("--{name} is required"))
    }

    pub fn i64_or(&self, name: &str, default: i64) -> i64 {
        self.get(name).and_then(Value::as_i64).unwrap_or(default)
    }

    pub fn f64_or(&self, name: &str, default: f64) -> f64 {
        self.get(name).and_then(Value::as_f64).unwrap_or(default)
    }

    pub fn opt_str(&self, name: &str) -> Option<&str> {
        self.get(name).and_then(Value::as_str)
    }

    pub fn str_or<'a>(&'a self, name: &str, default: &'a str) -> &'a str {
        self.opt_str(name).unwrap_or(default)
    }
}

/// Converts a raw flag or config value to the schema type.
pub fn coerce(spec: &ArgSpec, raw: &Value) -> Result<Value, String> {
    let bad = || format!("--{}: expected {:?}, got {raw}", spec.name, spec.kind);
    let text = match raw {
        Value::String(s) => Some(s.as_str()),
        _ => None,
    };
    Ok(match spec.kind {
        Kind::U64 => match (raw.as_u64(), text) {
            (Some(v), _) => Value::from(v),
            (None, Some(t)) => Value::from(t.trim().parse::<u64>().map_err(|_| bad())?),
            _ => return Err(bad()),
        },
        Kind::I64 => match (raw.as_i64(), text) {
            (Some(v), _) => Value::from(v),
            (None, Some(t)) => Value::from(t.trim().parse::<i64>().map_err(|_| bad())?),
            _ => return Err(bad()),
        },
        Kind::F64 => {
            let v = match (raw.as_f64(), text) {
                (Some(v), _) => v,
                (None, Some(t)) => t.trim().parse::<f64>().map_err(|_| bad())?,
                _ => return Err(bad()),
            };
            if !v.is_finite() {
                return Err(format!("--{}: value must be finite", spec.name));
            }
            crate::report::num(v)
        }
        Kind::Str => match text {
            Some(t) => Value::from(t),
            None => return Err(bad()),
        },
    })
}

/// Contents of a `--config` JSON file. Keys may use `-` or `_`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FileConfig {
    pub parameters: BTreeMap<String, Value>,
    pub precision_mode: Option<String>,
    pub parallelism: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<String>,
}

pub fn read_config_file(path: &Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let Value::Object(top) = v else {
        return Err(format!("{}: top level must be an object", path.display()));
    };
    let mut out = FileConfig::default();
    for (key, val) in top {
        match key.replace('_', "-").as_str() {
            "parameters" => {
                let Value::Object(m) = val else {
                    return Err("config: parameters must be an object".into());
                };
                out.parameters = m.into_iter().map(|(k, v)| (k.replace('_', "-"), v)).collect();
            }
            "precision-mode" => out.precision_mode = Some(val.as_str().ok_or("config: precision_mode must be a string")?.into()),
            "parallelism" => out.parallelism = Some(val.as_u64().ok_or("config: parallelism must be a positive integer")?),
            "output" | "output-path" => out.output = Some(val.as_str().ok_or("config: output must be a string")?.into()),
            "format" => out.format = Some(val.as_str().ok_or("config: format must be a string")?.into()),
            other => return Err(format!("config: unknown key {other:?}")),
        }
    }
    Ok(out)
}

/// Merges config-file parameters under flag values and checks every key against the schema.
pub fn merge_parameters(
    spec: &CommandSpec,
    from_file: &BTreeMap<String, Value>,
    from_flags: &BTreeMap<String, Value>,
) -> Result<Params, String> {
    let mut out = BTreeMap::new();
    for (source, map) in [("config", from_file), ("flag", from_flags)] {
        for (k, raw) in map {
            let arg = spec
                .args
                .iter()
                .find(|a| a.name == k)
                .ok_or_else(|| format!("{source} parameter {k:?} is not accepted by {}", spec.name))?;
            out.insert(k.clone(), coerce(arg, raw)?);
        }
    }
    Ok(Params(out))
}

/// Parallelism from the flag, then config, then the environment, then the machine.
pub fn resolve_parallelism(flag: Option<u64>, file: Option<u64>) -> Result<usize, String> {
    let from_env = match std::env::var(PARALLELISM_ENV) {
        Ok(s) => Some(s.trim().parse::<u64>().map_err(|_| format!("{PARALLELISM_ENV} must be a positive integer, got {s:?}"))?),
        Err(_) => None,
    };
    let p = flag
        .or(file)
        .or(from_env)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get() as u64).unwrap_or(1));
    if p == 0 || p > 1024 {
        return Err(format!("parallelism must be in 1..=1024, got {p}"));
    }
    Ok(p as usize)
}
