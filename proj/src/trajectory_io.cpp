#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "mkv/errors.hpp"
#include "mkv/integrator.hpp"

namespace mkv {

static_assert(std::endian::native == std::endian::little, "trajectory dump assumes a little-endian host");

namespace {

template <class T>
void put(std::ostream& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.write(buf, sizeof(T));
}

template <class T>
T get(std::istream& in) {
    char buf[sizeof(T)];
    if (!in.read(buf, sizeof(T))) throw shape_error("truncated trajectory dump");
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

}  // namespace

void write_trajectory_dump(const trajectory_bundle& b, std::ostream& out) {
    if (!b.has_paths()) throw domain_error("trajectory dump needs record_mode::full_trajectories");
    out.write("MKV1", 4);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(b.dim_state));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(b.dim_noise));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(b.particles));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(b.grid.steps()));
    put<double>(out, b.grid.horizon());
    for (double v : b.particle_paths) put<double>(out, v);
    for (double v : b.common_path) put<double>(out, v);
}

void write_trajectory_dump(const trajectory_bundle& b, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_trajectory_dump(b, out);
}

trajectory_dump read_trajectory_dump(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "MKV1", 4) != 0) throw shape_error("not an MKV1 trajectory dump");
    trajectory_dump d;
    d.dim_state = get<std::uint32_t>(in);
    d.dim_noise = get<std::uint32_t>(in);
    d.particles = get<std::uint32_t>(in);
    d.steps = get<std::uint32_t>(in);
    d.horizon = get<double>(in);
    const std::size_t nodes = std::size_t{d.steps} + 1;
    d.particle_paths.resize(std::size_t{d.particles} * nodes * d.dim_state);
    for (double& v : d.particle_paths) v = get<double>(in);
    d.common_path.resize(nodes * d.dim_noise);
    for (double& v : d.common_path) v = get<double>(in);
    return d;
}

}  // namespace mkv
