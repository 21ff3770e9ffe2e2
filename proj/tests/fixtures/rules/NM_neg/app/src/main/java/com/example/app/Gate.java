package com.example.app;

import android.net.ConnectivityManager;

final class Gate {
  private Gate() {
  }

  static boolean open(ConnectivityManager cm) {
    return Net.ready(cm);
  }
}
