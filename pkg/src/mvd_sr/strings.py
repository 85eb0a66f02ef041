_STRINGS = {
    "empty_mesh": "Grid has no occupied voxels, writing an empty mesh",
    "missing_checkpoint": "Model checkpoint not found",
    "missing_truth": "The oracle predictor needs --gt with the high resolution ODMs",
    "empty_dataset": "No low/high ODM pairs found in the dataset directory",
    "bad_resolution": "Resolution must be a positive integer",
    "interrupted": "Interrupted",
    "unknown_error": "Unknown error",
}


def get_string(id: str) -> str:
    if id in _STRINGS.keys():
        return _STRINGS[id]
    return _STRINGS["unknown_error"]
