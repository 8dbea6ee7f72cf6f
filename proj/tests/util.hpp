#ifndef IGDEPTH_TESTS_UTIL_HPP
#define IGDEPTH_TESTS_UTIL_HPP

#include <gtest/gtest.h>

#include <filesystem>
#include <functional>
#include <string>

#include "igdepth/error.hpp"

inline igdepth::ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const igdepth::Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no igdepth::Error thrown";
  return igdepth::ErrorKind::Internal;
}

// Fresh per-test scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  auto dir = std::filesystem::temp_directory_path() /
             ("igdepth_" + std::string(info->test_suite_name()) + "_" + info->name());
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

#endif  // IGDEPTH_TESTS_UTIL_HPP
