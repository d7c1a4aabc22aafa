"""Second-order alpha-skew-normal (BASN2) distributions: densities, moments,
sampling, lifetime variant, extension families and estimation."""

from .core import (DomainError, LocScaleParams, ModeReport, basn2_cdf, basn2_logpdf,
                   basn2_mode_report, basn2_pdf, basn2_quantile, basn2_sf, bn_pdf, bn4_cdf,
                   locscale_cdf, locscale_logpdf, locscale_pdf, locscale_quantile,
                   scbasn2_cdf, scbasn2_pdf)
from .inference import (Dataset, EstimationError, FitResult, compare_models, fit_model,
                        lr_test_normal_vs_basn2, mle_fit, mom_fit)
from .lifetime import hbasn2_cdf, hbasn2_hazard, hbasn2_pdf, hbasn2_survival, hazard_shape
from .moments import basn2_mgf, raw_moment, shape_summary
from .sampling import SampleConfig, sample_basn2, sample_locscale

__version__ = "0.1.0"
