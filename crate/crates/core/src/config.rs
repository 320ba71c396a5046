//! Size bounds shared by the engines. Defaults can be overridden through
//! environment variables, read once per process.

use std::sync::OnceLock;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest finite group any construction may produce.
    pub max_group_order: usize,
    /// Largest bar-complex basis (in one degree) the oracle will build.
    pub max_bar_basis: usize,
    /// Largest Hall basis for a free nilpotent group.
    pub max_hall_basis: usize,
    /// Largest rank of the free cover used when building presentation squares.
    pub max_cover_rank: usize,
    /// Largest working class tried by the stabilization protocol.
    pub max_working_class: usize,
    /// Largest cube dimension.
    pub max_cube_dim: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_group_order: 5040,
            max_bar_basis: 250_000,
            max_hall_basis: 4000,
            max_cover_rank: 8,
            max_working_class: 4,
            max_cube_dim: 3,
        }
    }
}

pub const ENV_VARS: [&str; 6] = [
    "HOPFCALC_MAX_GROUP_ORDER",
    "HOPFCALC_MAX_BAR_BASIS",
    "HOPFCALC_MAX_HALL_BASIS",
    "HOPFCALC_MAX_COVER_RANK",
    "HOPFCALC_MAX_WORKING_CLASS",
    "HOPFCALC_MAX_CUBE_DIM",
];

impl Limits {
    /// Defaults overridden by any of [`ENV_VARS`] that parse as integers.
    pub fn from_env() -> Self {
        let mut l = Limits::default();
        let fields: [&mut usize; 6] = [
            &mut l.max_group_order,
            &mut l.max_bar_basis,
            &mut l.max_hall_basis,
            &mut l.max_cover_rank,
            &mut l.max_working_class,
            &mut l.max_cube_dim,
        ];
        for (var, field) in ENV_VARS.iter().zip(fields) {
            if let Some(v) = std::env::var(var).ok().and_then(|s| s.trim().parse().ok()) {
                *field = v;
            }
        }
        l
    }

    /// Process-wide limits (environment read on first use).
    pub fn current() -> &'static Limits {
        static LIMITS: OnceLock<Limits> = OnceLock::new();
        LIMITS.get_or_init(Limits::from_env)
    }
}
