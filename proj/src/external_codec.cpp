/*
 * Copyright 2026 The isomer360 Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <sstream>

#include "isomer360/codec.hpp"
#include "isomer360/image_io.hpp"
#include "isomer360/projection.hpp"

namespace iso360 {

namespace fs = std::filesystem;

// Lossless encoding parameters, passed to ffmpeg verbatim.
static constexpr const char* kX264Flags = "-preset medium -crf 0 -an";
static constexpr const char* kX265Flags = "-preset medium -x265-params lossless=1 -crf 0 -an";
static constexpr const char* kLibvpxFlags = "-speed 4 -cpu-used 4 -lossless 1 -qmin 0 -qmax 0 -an";

const char* external_codec_flags(CodecId c) {
    switch (c) {
        case CodecId::h264: return kX264Flags;
        case CodecId::hevc: return kX265Flags;
        case CodecId::vp9: return kLibvpxFlags;
        case CodecId::reference: throw InputError("reference codec has no external flags");
    }
    return "";
}

namespace {

std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

struct ProcessResult {
    int exit_code = -1;
    bool spawn_failed = false;
    std::string output;  // stdout + stderr interleaved
};

// fork/exec without a shell; exec failures are reported through a CLOEXEC pipe
// so a missing binary is distinguishable from an encoder error.
ProcessResult run_process(const std::vector<std::string>& argv) {
    int out_pipe[2], err_pipe[2];
    if (pipe(out_pipe) != 0 || pipe2(err_pipe, O_CLOEXEC) != 0)
        throw InternalError("pipe() failed");

    pid_t pid = fork();
    if (pid < 0) throw InternalError("fork() failed");
    if (pid == 0) {
        close(out_pipe[0]);
        close(err_pipe[0]);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(out_pipe[1], STDERR_FILENO);
        close(out_pipe[1]);
        std::vector<char*> args;
        args.reserve(argv.size() + 1);
        for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
        args.push_back(nullptr);
        execvp(args[0], args.data());
        int err = errno;
        ssize_t n = write(err_pipe[1], &err, sizeof(err));
        (void)n;
        _exit(127);
    }
    close(out_pipe[1]);
    close(err_pipe[1]);

    ProcessResult res;
    char buf[4096];
    ssize_t n;
    while ((n = read(out_pipe[0], buf, sizeof(buf))) > 0) res.output.append(buf, size_t(n));
    close(out_pipe[0]);

    int exec_errno = 0;
    if (read(err_pipe[0], &exec_errno, sizeof(exec_errno)) == sizeof(exec_errno))
        res.spawn_failed = true;
    close(err_pipe[0]);

    int status = 0;
    waitpid(pid, &status, 0);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("isomer360-" + std::to_string(uint64_t(getpid())) + "-" +
                std::to_string(uint64_t(reinterpret_cast<uintptr_t>(this))));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

const char* encoder_lib(CodecId c) {
    switch (c) {
        case CodecId::h264: return "libx264";
        case CodecId::hevc: return "libx265";
        case CodecId::vp9: return "libvpx-vp9";
        default: return "";
    }
}

// raw bitstream muxers, so the measured size has no container overhead
void output_format(CodecId c, std::string* fmt, std::string* ext) {
    switch (c) {
        case CodecId::h264: *fmt = "h264"; *ext = ".264"; break;
        case CodecId::hevc: *fmt = "hevc"; *ext = ".265"; break;
        case CodecId::vp9: *fmt = "ivf"; *ext = ".ivf"; break;
        default: break;
    }
}

}  // namespace

bool external_encoder_available() {
    try {
        ProcessResult r = run_process({"ffmpeg", "-version"});
        return !r.spawn_failed && r.exit_code == 0;
    } catch (const Error&) {
        return false;
    }
}

EncodeResult encode_external(const ClipSpec& clip, CodecId codec) {
    if (codec == CodecId::reference)
        throw InputError("encode_external expects an external codec (h264/hevc/vp9)");
    if (clip.frames.empty()) throw InputError("cannot encode an empty clip");

    TempDir tmp;
    fs::path in_path = tmp.path / "clip.y4m";
    std::vector<Image8> rasters;
    rasters.reserve(clip.frames.size());
    for (const auto& f : clip.frames) rasters.push_back(f.raster);
    write_y4m(rasters, clip.fps, in_path.string(), Y4mColorspace::c420);

    std::string fmt, ext;
    output_format(codec, &fmt, &ext);
    fs::path out_path = tmp.path / ("clip" + ext);

    std::vector<std::string> argv = {"ffmpeg", "-y",         "-loglevel",       "error",
                                     "-i",     in_path.string(), "-c:v", encoder_lib(codec)};
    for (const auto& tok : split_tokens(external_codec_flags(codec))) argv.push_back(tok);
    argv.push_back("-f");
    argv.push_back(fmt);
    argv.push_back(out_path.string());

    ProcessResult r = run_process(argv);
    if (r.spawn_failed)
        throw EnvironmentError("ffmpeg not found; install ffmpeg with " +
                               std::string(encoder_lib(codec)) + " support");
    if (r.exit_code != 0)
        throw EncodeError("external encoder failed (exit " + std::to_string(r.exit_code) +
                          "): " + r.output);

    std::error_code ec;
    uint64_t size = fs::file_size(out_path, ec);
    if (ec || size == 0) throw EncodeError("external encoder produced no output");

    EncodeResult res;
    res.codec = codec;
    res.bytes = size;
    return res;
}

uint64_t size_at(const std::vector<EquirectFrame>& clip, const Orientation& o, CodecId codec,
                 int face_size, double fps) {
    ClipSpec spec;
    spec.frames = project_clip(clip, o, face_size);
    spec.fps = fps;
    if (codec == CodecId::reference) return encode_reference(spec).bytes;
    return encode_external(spec, codec).bytes;
}

}  // namespace iso360
