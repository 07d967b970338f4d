#include "cqsr/checkpoint.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace cqsr::checkpoint {

using nlohmann::json;

uint64_t fnv1a(const void* data, size_t n, uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

constexpr char kMagic[8] = {'C', 'Q', 'S', 'R', 'C', 'K', 'P', 'T'};

void write_u32(std::ostream& os, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<char*>(b), 4);
}

uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

json manifest_to_json(const Manifest& m) {
    return json{{"format_version", m.format_version},
                {"arch",
                 {{"D", m.dims.D},
                  {"blocks", m.dims.blocks},
                  {"cell", m.dims.cell},
                  {"embed", m.dims.embed},
                  {"K", m.dims.K},
                  {"T_max", m.dims.T_max}}},
                {"cell_realization", m.cell_realization},
                {"seed", m.seed},
                {"epoch", m.epoch},
                {"loss_digest", m.loss_digest},
                {"fixed_T", m.fixed_T},
                {"w_f", m.w_f}};
}

Manifest manifest_from_json(const json& j) {
    Manifest m;
    m.format_version = j.at("format_version").get<uint32_t>();
    const json& a = j.at("arch");
    m.dims = model::ModelDims{a.at("D").get<int>(),    a.at("blocks").get<int>(), a.at("cell").get<int>(),
                              a.at("embed").get<int>(), a.at("K").get<int>(),      a.at("T_max").get<int>()};
    m.cell_realization = j.at("cell_realization").get<std::string>();
    m.seed = j.at("seed").get<uint64_t>();
    m.epoch = j.at("epoch").get<int>();
    m.loss_digest = j.at("loss_digest").get<uint64_t>();
    m.fixed_T = j.at("fixed_T").get<bool>();
    m.w_f = j.at("w_f").get<double>();
    return m;
}

}  // namespace

void save(const std::filesystem::path& path, const model::ModelParams& params, const Manifest& manifest) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(os), "checkpoint::save: cannot open " + path.string());
    os.write(kMagic, sizeof(kMagic));
    const std::string mjson = manifest_to_json(manifest).dump();
    write_u32(os, static_cast<uint32_t>(mjson.size()));
    os.write(mjson.data(), static_cast<std::streamsize>(mjson.size()));

    const auto views = params.views();
    write_u32(os, static_cast<uint32_t>(views.size()));
    for (const auto& v : views) {
        write_u32(os, static_cast<uint32_t>(v.name.size()));
        os.write(v.name.data(), static_cast<std::streamsize>(v.name.size()));
        write_u32(os, static_cast<uint32_t>(v.size));
        std::vector<float> buf(static_cast<size_t>(v.size));
        for (Eigen::Index i = 0; i < v.size; ++i) buf[i] = static_cast<float>(v.data[i]);
        os.write(reinterpret_cast<const char*>(buf.data()),
                 static_cast<std::streamsize>(buf.size() * sizeof(float)));
    }
    require(static_cast<bool>(os), "checkpoint::save: write failed for " + path.string());
}

Loaded load(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    require(static_cast<bool>(is), "checkpoint::load: cannot open " + path.string());
    char magic[8];
    is.read(magic, 8);
    require(is && std::equal(magic, magic + 8, kMagic), "checkpoint::load: bad magic in " + path.string());
    const uint32_t mlen = read_u32(is);
    std::string mjson(mlen, '\0');
    is.read(mjson.data(), mlen);
    Loaded out;
    out.manifest = manifest_from_json(json::parse(mjson));
    require(out.manifest.format_version == kFormatVersion, "checkpoint::load: unsupported format version");

    out.params = model::init_params(out.manifest.dims, 0);
    auto views = out.params.views();
    const uint32_t n_blobs = read_u32(is);
    require(n_blobs == views.size(), "checkpoint::load: parameter group count mismatch");
    for (auto& v : views) {
        const uint32_t nlen = read_u32(is);
        std::string name(nlen, '\0');
        is.read(name.data(), nlen);
        require(name == v.name, "checkpoint::load: unexpected parameter group '" + name + "'");
        const uint32_t count = read_u32(is);
        require(count == static_cast<uint32_t>(v.size), "checkpoint::load: shape mismatch in " + name);
        std::vector<float> buf(count);
        is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count * sizeof(float)));
        for (uint32_t i = 0; i < count; ++i) v.data[i] = static_cast<double>(buf[i]);
    }
    require(static_cast<bool>(is), "checkpoint::load: truncated file " + path.string());
    return out;
}

}  // namespace cqsr::checkpoint
