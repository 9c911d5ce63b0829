#pragma once

#include <optional>

#include "bmld/head.hpp"
#include "bmld/image_source.hpp"
#include "bmld/rir.hpp"
#include "bmld/tail.hpp"

namespace bmld {

/// Renders the image sources through the spherical head model: per-ear
/// Woodworth delay, 1/r attenuation and the head-shadow filter. No tail.
Rir render_images_binaural(const ImageSourceSet& images, const HeadModel& head, double fs);

/// Image sources plus a pre-synthesized coherent tail. The tail must share fs.
Rir render_brir(const ImageSourceSet& images, const Tail& tail, const HeadModel& head,
                double fs);

/// Hybrid binaural response: exact early part from the image sources, then a
/// stochastic tail scaled so the assembled response meets spec.drr_db. The
/// direct/early energies of `spec` are filled in from the rendering.
Rir assemble_brir(const ImageSourceSet& images, TailSpec spec, const HeadModel& head,
                  double fs);

/// Omnidirectional hybrid response (one channel, tail left channel used).
Rir assemble_rir_omni(const ImageSourceSet& images, TailSpec spec, double fs);

/// Anechoic source at `azimuth_deg` / `distance_m` relative to the head.
Rir render_point_source(double azimuth_deg, double distance_m, const HeadModel& head,
                        double fs);

}  // namespace bmld
