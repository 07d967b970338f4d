from ._cqsr import (  # noqa: F401
    Model,
    alignment_loss,
    amplitude_spectrum,
    bicubic_resize,
    coord_grid,
    init_model,
    load_checkpoint,
    psnr_y,
    reconstruct,
    rgb_to_y,
    truncate_top_t,
)
