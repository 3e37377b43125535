#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "stimwave/errors.hpp"
#include "stimwave/solver.hpp"

namespace stimwave {

/// Binary dump of a FieldHistory for cross-language reuse.
///
/// Layout (little-endian):
///   bytes 0..3   magic "SWH1"
///   u32          format version (1)
///   i32          n_left, n_right, n_steps
///   f64          dr
///   f64          damp, feed, detuning (sector rates)
///   f64          pulse width (delta), pulse norm_scale
///   u8           asymptotic_valid flag
///   payload      (n_steps+1) rows x n_cells cells, row-major,
///                each cell two little-endian float32 (re, im) --
///                numpy complex64 compatible.
inline void write_history(const FieldHistory& h, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot open '" + path + "' for writing");
    const Grid1D& g = h.grid();

    out.write("SWH1", 4);
    auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto put_i32 = [&](std::int32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    put_u32(1);
    put_i32(g.n_left);
    put_i32(g.n_right);
    put_i32(h.n_steps());
    put_f64(g.dr);
    put_f64(h.rates().damp);
    put_f64(h.rates().feed);
    put_f64(h.rates().detuning);
    put_f64(h.pulse().width);
    put_f64(h.pulse().norm_scale);
    const std::uint8_t flag = h.asymptotic_valid() ? 1 : 0;
    out.write(reinterpret_cast<const char*>(&flag), 1);

    std::vector<float> buf(std::size_t(g.n_cells()) * 2);
    for (int n = 0; n <= h.n_steps(); ++n) {
        const cplx* row = h.row(n);
        for (int j = 0; j < g.n_cells(); ++j) {
            buf[std::size_t(2 * j)] = static_cast<float>(row[j].real());
            buf[std::size_t(2 * j) + 1] = static_cast<float>(row[j].imag());
        }
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size() * sizeof(float)));
    }
    if (!out) throw error("short write to '" + path + "'");
}

inline FieldHistory read_history(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open '" + path + "' for reading");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "SWH1", 4) != 0)
        throw error("'" + path + "' is not a field-history dump");
    auto get_u32 = [&] { std::uint32_t v; in.read(reinterpret_cast<char*>(&v), 4); return v; };
    auto get_i32 = [&] { std::int32_t v; in.read(reinterpret_cast<char*>(&v), 4); return v; };
    auto get_f64 = [&] { double v; in.read(reinterpret_cast<char*>(&v), 8); return v; };
    const std::uint32_t version = get_u32();
    if (version != 1) throw error("unsupported field-history version");
    const int n_left = get_i32();
    const int n_right = get_i32();
    const int n_steps = get_i32();
    const double dr = get_f64();
    SectorRates rates{get_f64(), get_f64(), get_f64()};
    const double width = get_f64();
    const double norm_scale = get_f64();
    std::uint8_t flag = 0;
    in.read(reinterpret_cast<char*>(&flag), 1);
    if (!in) throw error("truncated field-history header");

    Grid1D g = Grid1D::make(-n_left * dr, n_right * dr, dr, n_steps);
    Pulse pulse;
    pulse.grid = g;
    pulse.width = width;
    pulse.detuning = rates.detuning;
    pulse.norm_scale = norm_scale;
    pulse.amplitude.assign(std::size_t(g.n_cells()), cplx(0.0, 0.0));

    FieldHistory h(pulse, rates, g, n_steps);
    std::vector<float> buf(std::size_t(g.n_cells()) * 2);
    for (int n = 0; n <= n_steps; ++n) {
        in.read(reinterpret_cast<char*>(buf.data()),
                static_cast<std::streamsize>(buf.size() * sizeof(float)));
        if (!in) throw error("truncated field-history payload");
        cplx* row = h.row(n);
        for (int j = 0; j < g.n_cells(); ++j)
            row[j] = cplx(buf[std::size_t(2 * j)], buf[std::size_t(2 * j) + 1]);
    }
    // restore the pulse samples from the initial row
    std::copy(h.row(0), h.row(0) + g.n_cells(), h.pulse_samples().begin());
    h.set_asymptotic_valid(flag != 0);
    return h;
}

} // namespace stimwave
