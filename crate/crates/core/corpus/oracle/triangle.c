void f(int n, int s) {
    for (int i = 0; i < n; i++) {
        for (int j = 0; j < i; j++) {
            s = s + j;
        }
    }
    s = s + n + i;
}
