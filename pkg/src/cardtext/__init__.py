"""Text region extraction and binarization for camera-captured business cards."""
from .background import BackgroundParams, BlockGrid, BlockLabel, BlockStats, ImageTooSmall, classify_block, eliminate_background, sigma_threshold
from .binarizer import BinaryPatch, binarize_cc, compose_output
from .classifier import RegionLabel, RuleThresholds, classify_cc, derive_thresholds, fill_ratio
from .components import ConnectedComponent, cc_features, label_components
from .config import PipelineConfig
from .pipeline import PipelineResult, run_pipeline
from .raster_io import BinaryImage, GrayImage, load_image, save_binary, save_image, to_grayscale

__version__ = "0.1.0"
