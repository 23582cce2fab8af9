#include "depq/io.hpp"

#include <fstream>
#include <system_error>

#include "depq/error.hpp"

namespace depq {

void write_files(const FileContents& files) {
  std::vector<std::filesystem::path> staged;
  auto discard = [&] {
    std::error_code ignored;
    for (const auto& tmp : staged) std::filesystem::remove(tmp, ignored);
  };

  for (const auto& [path, contents] : files) {
    auto tmp = path;
    tmp += ".partial";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) staged.push_back(tmp);
    if (out) out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) {
      discard();
      throw IoError("cannot write '" + path.string() + "'");
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    std::filesystem::rename(staged[i], files[i].first, ec);
    if (ec) {
      discard();
      throw IoError("cannot move '" + staged[i].string() + "' into place: " + ec.message());
    }
  }
}

}  // namespace depq
