package com.example.glance;

import android.content.Context;
import android.content.Intent;
import android.provider.MediaStore;

/** Swipe gesture on the lock screen that opens the camera. */
public class CameraShortcut {
    private final Context context;
    private float swipeThreshold = 0.3f;

    public CameraShortcut(Context context) {
        this.context = context;
    }

    /** Launches the camera app without unlocking. */
    public void launchCamera() {
        Intent intent = new Intent(MediaStore.INTENT_ACTION_STILL_IMAGE_CAMERA_SECURE);
        context.startActivity(intent);
    }
}
