#include "omlog/neural/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "omlog/errors.hpp"

namespace omlog::neural {
namespace {

constexpr char kMagic[8] = {'O', 'M', 'L', 'G', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "checkpoint IO assumes a little-endian host");

template <typename T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is, const std::string& path) {
    T v{};
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw DataError(path + ": truncated checkpoint");
    return v;
}

std::string get_bytes(std::istream& is, std::size_t n, const std::string& path) {
    std::string s(n, '\0');
    if (n && !is.read(s.data(), static_cast<std::streamsize>(n))) throw DataError(path + ": truncated checkpoint");
    return s;
}

}  // namespace

const Tensor& Checkpoint::tensor(const std::string& name) const {
    for (const auto& [n, t] : tensors) {
        if (n == name) return t;
    }
    throw DataError("checkpoint has no tensor " + name);
}

void write_checkpoint(const std::filesystem::path& path, const ParameterStore& params,
                      const nlohmann::json& manifest) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write " + path.string());
    os.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(os, kVersion);
    const std::string m = manifest.dump();
    put<std::uint64_t>(os, m.size());
    os.write(m.data(), static_cast<std::streamsize>(m.size()));
    put<std::uint64_t>(os, params.size());
    for (const auto* p : params.items()) {
        put<std::uint32_t>(os, static_cast<std::uint32_t>(p->name.size()));
        os.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
        put<std::uint32_t>(os, static_cast<std::uint32_t>(p->value.rank()));
        for (auto d : p->value.shape()) put<std::uint64_t>(os, d);
        const auto v = p->value.values();
        os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    }
    if (!os) throw Error("failed writing " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    const std::string where = path.string();
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("missing checkpoint " + where);
    char magic[8];
    if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
        throw DataError(where + ": not a checkpoint file");
    }
    const auto version = get<std::uint32_t>(is, where);
    if (version != kVersion) throw DataError(where + ": unsupported checkpoint version " + std::to_string(version));

    Checkpoint ckpt;
    const auto mlen = get<std::uint64_t>(is, where);
    try {
        ckpt.manifest = nlohmann::json::parse(get_bytes(is, mlen, where));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(where + ": bad manifest: " + e.what());
    }
    const auto count = get<std::uint64_t>(is, where);
    for (std::uint64_t i = 0; i < count; ++i) {
        auto name = get_bytes(is, get<std::uint32_t>(is, where), where);
        const auto rank = get<std::uint32_t>(is, where);
        if (rank == 0 || rank > 8) throw DataError(where + ": bad rank for " + name);
        std::vector<std::size_t> shape(rank);
        for (auto& d : shape) d = get<std::uint64_t>(is, where);
        Tensor t(shape);
        auto v = t.values();
        if (!is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)))) {
            throw DataError(where + ": truncated tensor " + name);
        }
        ckpt.tensors.emplace_back(std::move(name), std::move(t));
    }
    return ckpt;
}

void apply_checkpoint(const Checkpoint& ckpt, ParameterStore& params) {
    for (auto* p : params.items()) {
        const Tensor& t = ckpt.tensor(p->name);
        if (t.shape() != p->value.shape()) {
            throw DataError("checkpoint tensor " + p->name + " has shape " + t.shape_string() + ", expected " +
                            p->value.shape_string());
        }
        p->value = t;
        p->sync_grad_shape();
    }
}

}  // namespace omlog::neural
