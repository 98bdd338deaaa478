#include "mkv/noise.hpp"

#include "mkv/errors.hpp"

namespace mkv {

noise_increments::noise_increments(std::size_t particles, std::size_t dim_noise)
    : particles_(particles), dim_noise_(dim_noise), idio_(particles * dim_noise, 0.0),
      common_(dim_noise, 0.0) {
    if (particles == 0 || dim_noise == 0) throw shape_error("noise increments need N >= 1 and q >= 1");
}

noise_increments sample_increments(rng_stream& stream, std::size_t particles, std::size_t dim_noise) {
    noise_increments z(particles, dim_noise);
    for (std::size_t i = 0; i < particles; ++i)
        for (std::size_t j = 0; j < dim_noise; ++j) z.idio(i, j) = stream.next_normal();
    for (double& c : z.common()) c = stream.next_normal();
    return z;
}

}  // namespace mkv
